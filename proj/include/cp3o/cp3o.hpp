#pragma once

#include "cp3o/config.hpp"
#include "cp3o/divergence.hpp"
#include "cp3o/errors.hpp"
#include "cp3o/eval.hpp"
#include "cp3o/io.hpp"
#include "cp3o/result.hpp"
#include "cp3o/search.hpp"
#include "cp3o/segmentation.hpp"
#include "cp3o/time_series.hpp"
