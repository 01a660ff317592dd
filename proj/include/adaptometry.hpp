#pragma once

#include "adaptometry/correlation.hpp"
#include "adaptometry/dispersion.hpp"
#include "adaptometry/error.hpp"
#include "adaptometry/panel.hpp"
#include "adaptometry/report.hpp"
#include "adaptometry/svg.hpp"
#include "adaptometry/synthgen.hpp"
#include "adaptometry/variation.hpp"
