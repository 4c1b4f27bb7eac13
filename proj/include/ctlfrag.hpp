#pragma once

#include "ctlfrag/error.hpp"
#include "ctlfrag/ctl.hpp"
#include "ctlfrag/kripke.hpp"
#include "ctlfrag/sat_search.hpp"
#include "ctlfrag/structure.hpp"
#include "ctlfrag/decomposition.hpp"
#include "ctlfrag/mso.hpp"
#include "ctlfrag/theta.hpp"
#include "ctlfrag/reductions.hpp"
#include "ctlfrag/random_formula.hpp"
