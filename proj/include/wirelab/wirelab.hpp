#pragma once

#include "wirelab/adder.hpp"
#include "wirelab/bench.hpp"
#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"
#include "wirelab/diagram.hpp"
#include "wirelab/gate_id.hpp"
#include "wirelab/io.hpp"
#include "wirelab/naive.hpp"
#include "wirelab/reachability.hpp"
#include "wirelab/recycle.hpp"
#include "wirelab/rewrite.hpp"
