// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "algorithms.hpp"
#include "distance.hpp"
#include "doc.hpp"
#include "impossibility.hpp"
#include "model.hpp"
#include "sim.hpp"
#include "topology.hpp"
#include "universal.hpp"
#include "view.hpp"
