#pragma once

#include "fovlab/error.hpp"
#include "fovlab/fov.hpp"
#include "fovlab/geometry.hpp"
#include "fovlab/gfov.hpp"
#include "fovlab/io.hpp"
#include "fovlab/matcore.hpp"
#include "fovlab/random.hpp"
#include "fovlab/rayleigh.hpp"
#include "fovlab/spectra.hpp"
#include "fovlab/variational.hpp"
