#pragma once

#include "exactmg/linalg.hpp"
#include "exactmg/discretization.hpp"
#include "exactmg/transfer.hpp"
#include "exactmg/smoother.hpp"
#include "exactmg/cycles.hpp"
#include "exactmg/spectral.hpp"
