#pragma once

#include "graad/crypto/group.hpp"

namespace graad::detail {

// Process-wide singletons; elements keep raw pointers to their group.
GroupPtr toy_group();
GroupPtr type_a_group();

}  // namespace graad::detail
