#pragma once

#include "numrad/cutting.hpp"
#include "numrad/fov.hpp"
#include "numrad/gallery.hpp"
#include "numrad/hybrid.hpp"
#include "numrad/levelset.hpp"
#include "numrad/linalg.hpp"
#include "numrad/local_opt.hpp"
#include "numrad/matrix_market.hpp"
#include "numrad/report.hpp"
#include "numrad/theory.hpp"
