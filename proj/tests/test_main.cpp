// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
