#pragma once

#include "qmax/asymptotics.hpp"
#include "qmax/ell2.hpp"
#include "qmax/gf_ell1.hpp"
#include "qmax/joint_table.hpp"
#include "qmax/linalg.hpp"
#include "qmax/montecarlo.hpp"
#include "qmax/params.hpp"
#include "qmax/polyroots.hpp"
#include "qmax/rational.hpp"
#include "qmax/rng.hpp"
#include "qmax/series.hpp"
#include "qmax/stationary.hpp"
#include "qmax/walk.hpp"
