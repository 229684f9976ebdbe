#pragma once

#include "gpart/bench.hpp"
#include "gpart/brute_force.hpp"
#include "gpart/dense.hpp"
#include "gpart/errors.hpp"
#include "gpart/generators.hpp"
#include "gpart/gnn.hpp"
#include "gpart/graph.hpp"
#include "gpart/graph_io.hpp"
#include "gpart/kernighan_lin.hpp"
#include "gpart/loss.hpp"
#include "gpart/random.hpp"
#include "gpart/settings.hpp"
#include "gpart/spectral.hpp"
#include "gpart/train.hpp"
