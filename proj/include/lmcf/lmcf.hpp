#pragma once

// Umbrella header for the tracking core (no image file I/O; see lmcf/io/).

#include "lmcf/benchmark.hpp"
#include "lmcf/color_names.hpp"
#include "lmcf/confidence.hpp"
#include "lmcf/config.hpp"
#include "lmcf/dataset.hpp"
#include "lmcf/detector.hpp"
#include "lmcf/error.hpp"
#include "lmcf/features.hpp"
#include "lmcf/geometry.hpp"
#include "lmcf/grid.hpp"
#include "lmcf/hog.hpp"
#include "lmcf/image.hpp"
#include "lmcf/labels.hpp"
#include "lmcf/optimizer.hpp"
#include "lmcf/results.hpp"
#include "lmcf/sampling.hpp"
#include "lmcf/scale.hpp"
#include "lmcf/spectral.hpp"
#include "lmcf/synthetic.hpp"
#include "lmcf/tracker.hpp"
