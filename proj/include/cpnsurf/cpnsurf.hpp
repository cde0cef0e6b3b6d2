#pragma once

#include "errors.hpp"
#include "geometry.hpp"
#include "holo.hpp"
#include "immersion.hpp"
#include "jets.hpp"
#include "quadrature.hpp"
#include "surface.hpp"
#include "tower.hpp"
