#pragma once

#include <strongconv/caratheodory.hpp>
#include <strongconv/covering.hpp>
#include <strongconv/strong_set.hpp>
#include <strongconv/summand.hpp>
#include <strongconv/witnesses.hpp>
