// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "maxstable/distributions.hpp"
#include "maxstable/errors.hpp"
#include "maxstable/quadrature.hpp"
#include "maxstable/random.hpp"
#include "maxstable/samplers.hpp"
#include "maxstable/stdf.hpp"
#include "maxstable/verify.hpp"
