#pragma once

#include "bndg/rational.hpp"
#include "bndg/graph.hpp"
#include "bndg/subsets.hpp"
#include "bndg/steiner.hpp"
#include "bndg/game.hpp"
#include "bndg/expectation.hpp"
#include "bndg/normal_form.hpp"
#include "bndg/equilibria.hpp"
#include "bndg/cost_sharing.hpp"
#include "bndg/rng.hpp"
#include "bndg/sampling.hpp"
#include "bndg/instance_io.hpp"
#include "bndg/generator.hpp"
#include "bndg/cli.hpp"
