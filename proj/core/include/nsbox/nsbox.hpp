#pragma once

#include "nsbox/bits.hpp"
#include "nsbox/box.hpp"
#include "nsbox/functionals.hpp"
#include "nsbox/icgame.hpp"
#include "nsbox/serialize.hpp"
#include "nsbox/wiring.hpp"
