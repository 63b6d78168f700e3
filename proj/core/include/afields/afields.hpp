#pragma once

#include "afields/algebroid.hpp"
#include "afields/field_function.hpp"
#include "afields/grid.hpp"
#include "afields/hamiltonian.hpp"
#include "afields/io.hpp"
#include "afields/jet.hpp"
#include "afields/lagrangian.hpp"
#include "afields/legendre.hpp"
#include "afields/march.hpp"
#include "afields/models.hpp"
#include "afields/poly.hpp"
#include "afields/prolongation.hpp"
#include "afields/whitney.hpp"
