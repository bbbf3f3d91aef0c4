#pragma once

#include "bits.hpp"
#include "circuit.hpp"
#include "codebook.hpp"
#include "dicke.hpp"
#include "dispersion.hpp"
#include "gas.hpp"
#include "gas_circuit.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "objective.hpp"
#include "random.hpp"
#include "search_space.hpp"
#include "statevec.hpp"
