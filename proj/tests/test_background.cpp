#include <doctest.h>
#include "ssns/core.hpp"
TEST_CASE("placeholder") { CHECK(true); }
