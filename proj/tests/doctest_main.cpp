// Apache License, Version 2.0, refer to LICENSE
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
