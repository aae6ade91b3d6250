#pragma once

#include "coxhodge/errors.hpp"
#include "coxhodge/field.hpp"
#include "coxhodge/matrix.hpp"
#include "coxhodge/coxeter.hpp"
#include "coxhodge/polynomial.hpp"
#include "coxhodge/graded_module.hpp"
#include "coxhodge/decompose.hpp"
#include "coxhodge/bott_samelson.hpp"
#include "coxhodge/schubert.hpp"
#include "coxhodge/hodge.hpp"
