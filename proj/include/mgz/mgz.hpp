// Copyright 2026 the mgz developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mgz/bitstream.hpp"
#include "mgz/codec.hpp"
#include "mgz/combinadic.hpp"
#include "mgz/empirical.hpp"
#include "mgz/entropy.hpp"
#include "mgz/errors.hpp"
#include "mgz/generators.hpp"
#include "mgz/isomorphism.hpp"
#include "mgz/marked_graph.hpp"
#include "mgz/numeric.hpp"
#include "mgz/rooted.hpp"
#include "mgz/typeclass.hpp"
