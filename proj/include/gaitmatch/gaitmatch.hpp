#pragma once

#include "gaitmatch/bench.hpp"
#include "gaitmatch/eval.hpp"
#include "gaitmatch/history.hpp"
#include "gaitmatch/io.hpp"
#include "gaitmatch/kernel.hpp"
#include "gaitmatch/matcher_incremental.hpp"
#include "gaitmatch/matcher_naive.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/synthgait.hpp"
#include "gaitmatch/training.hpp"
#include "gaitmatch/types.hpp"
