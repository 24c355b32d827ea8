#ifndef PERV_TESTS_SUPPORT_HPP
#define PERV_TESTS_SUPPORT_HPP

#include "perv/random.hpp"

#endif  // PERV_TESTS_SUPPORT_HPP
