#pragma once

// Umbrella header: pulls in the whole library.

#include "volrate/bond.hpp"
#include "volrate/config.hpp"
#include "volrate/convexity.hpp"
#include "volrate/curves.hpp"
#include "volrate/driver.hpp"
#include "volrate/hurst.hpp"
#include "volrate/kernel.hpp"
#include "volrate/model.hpp"
#include "volrate/numerics.hpp"
#include "volrate/products.hpp"
#include "volrate/simulation.hpp"
