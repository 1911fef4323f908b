#pragma once

#include "ffa/enumerate.hpp"
#include "ffa/error.hpp"
#include "ffa/feature_set.hpp"
#include "ffa/ffa.hpp"
#include "ffa/graphffa.hpp"
#include "ffa/hitting.hpp"
#include "ffa/metrics.hpp"
#include "ffa/model.hpp"
#include "ffa/oracle.hpp"
#include "ffa/random.hpp"
#include "ffa/sat.hpp"
