#pragma once

#include "hs2/errors.hpp"
#include "hs2/params.hpp"
#include "hs2/special.hpp"
#include "hs2/coupling.hpp"
#include "hs2/quadrature.hpp"
#include "hs2/radial.hpp"
#include "hs2/deficit.hpp"
#include "hs2/stability.hpp"
#include "hs2/transform.hpp"
#include "hs2/elemineq.hpp"
#include "hs2/instances.hpp"
#include "hs2/acceptance.hpp"
