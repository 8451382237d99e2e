// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fastk/controller.hpp"
#include "fastk/data_gen.hpp"
#include "fastk/dataset.hpp"
#include "fastk/idx_io.hpp"
#include "fastk/losses.hpp"
#include "fastk/manifest.hpp"
#include "fastk/models.hpp"
#include "fastk/rng.hpp"
#include "fastk/sim.hpp"
#include "fastk/straggler.hpp"
#include "fastk/theory.hpp"
#include "fastk/trace_io.hpp"
