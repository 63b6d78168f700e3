#include "afields/field_function.hpp"

namespace afields {

ad::Jet compose_chain(double f0, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                      std::span<const ad::Jet> x) {
  ad::Jet out(f0);
  // accumulate sum_j g_j * (x_j - x_j.value) symbolically through jet arithmetic
  for (size_t j = 0; j < x.size(); ++j) {
    const int jj = static_cast<int>(j);
    if (grad[jj] != 0.0) out += grad[jj] * (x[j] - x[j].value());
  }
  if (hess.size() > 0) {
    for (size_t j = 0; j < x.size(); ++j) {
      for (size_t l = 0; l < x.size(); ++l) {
        const double h = hess(static_cast<int>(j), static_cast<int>(l));
        if (h != 0.0)
          out += 0.5 * h * (x[j] - x[j].value()) * (x[l] - x[l].value());
      }
    }
  }
  return out;
}

FieldFunction FieldFunction::from_plain_callback(
    int n, int m, int k, Side domain, std::function<double(const Eigen::VectorXd&)> f) {
  const int dim = n + m * k;
  auto grad_fd = [f, dim](const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(dim);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < dim; ++i) {
      xp[i] = x[i] + h;
      double fp = f(xp);
      xp[i] = x[i] - h;
      double fm = f(xp);
      xp[i] = x[i];
      g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
  };

  Fn fn = [f, grad_fd, dim](std::span<const ad::Jet> xs) {
    Eigen::VectorXd x = ad::values(xs);
    const double h1 = 1e-6;
    double f0 = f(x);
    Eigen::VectorXd g = grad_fd(x, h1);

    bool second = false;
    for (const auto& j : xs)
      if (j.has_hess()) second = true;

    Eigen::MatrixXd H;
    if (second) {
      const double h2 = 1e-4;
      H.resize(dim, dim);
      Eigen::VectorXd xp = x;
      for (int i = 0; i < dim; ++i) {
        xp[i] = x[i] + h2;
        Eigen::VectorXd gp = grad_fd(xp, h1);
        xp[i] = x[i] - h2;
        Eigen::VectorXd gm = grad_fd(xp, h1);
        xp[i] = x[i];
        H.row(i) = ((gp - gm) / (2.0 * h2)).transpose();
      }
      H = 0.5 * (H + H.transpose()).eval();  // symmetrize FD noise
    }
    return compose_chain(f0, g, H, xs);
  };

  return FieldFunction(n, m, k, domain, std::move(fn), /*has_hessian=*/true);
}

}  // namespace afields
