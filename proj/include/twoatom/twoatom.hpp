#pragma once

#include "twoatom/analysis.hpp"
#include "twoatom/dynamics.hpp"
#include "twoatom/errors.hpp"
#include "twoatom/oracle.hpp"
#include "twoatom/rates.hpp"
#include "twoatom/trace.hpp"
