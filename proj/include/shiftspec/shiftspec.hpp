#pragma once

#include "shiftspec/error.hpp"
#include "shiftspec/weights.hpp"
#include "shiftspec/constructions.hpp"
#include "shiftspec/corpus.hpp"
#include "shiftspec/tridiagonal.hpp"
#include "shiftspec/radii.hpp"
#include "shiftspec/region.hpp"
#include "shiftspec/compare.hpp"
#include "shiftspec/vector.hpp"
#include "shiftspec/oracle.hpp"
#include "shiftspec/classify.hpp"
#include "shiftspec/local.hpp"
#include "shiftspec/io.hpp"
#include "shiftspec/report.hpp"
#include "shiftspec/plot.hpp"
