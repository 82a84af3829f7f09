#pragma once

#include "pushfront/errors.hpp"
#include "pushfront/grid.hpp"
#include "pushfront/model.hpp"
#include "pushfront/spectral.hpp"
#include "pushfront/profile.hpp"
#include "pushfront/simulator.hpp"
#include "pushfront/diagnostics.hpp"
