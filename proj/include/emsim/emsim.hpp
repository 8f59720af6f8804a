#pragma once

#include "emsim/channel.hpp"
#include "emsim/config.hpp"
#include "emsim/errors.hpp"
#include "emsim/random.hpp"
#include "emsim/scenario.hpp"
#include "emsim/selection.hpp"
#include "emsim/serialization.hpp"
#include "emsim/topology.hpp"
