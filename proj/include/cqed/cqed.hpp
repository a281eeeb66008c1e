#pragma once

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/circuit.hpp"
#include "cqed/foster.hpp"
#include "cqed/cpb.hpp"
#include "cqed/rabi.hpp"
#include "cqed/spectroscopy.hpp"
#include "cqed/simplex.hpp"
#include "cqed/fitting.hpp"
#include "cqed/design.hpp"
