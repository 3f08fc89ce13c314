// qpqlab.hpp
// Umbrella header.

#pragma once

#include "qpqlab/adversary.hpp"
#include "qpqlab/baselines.hpp"
#include "qpqlab/harness.hpp"
#include "qpqlab/interrogation.hpp"
#include "qpqlab/parallel.hpp"
#include "qpqlab/protocol.hpp"
#include "qpqlab/rng.hpp"
#include "qpqlab/state_vector.hpp"
