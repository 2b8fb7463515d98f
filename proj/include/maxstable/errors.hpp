// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace maxstable {

/// Invalid parameter or argument outside the documented domain.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine (quadrature, root search) missed its tolerance.
class NumericFailure : public std::runtime_error {
  public:
    NumericFailure(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved tolerance " +
                             std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

  private:
    double achieved_;
};

/// A sampler exhausted its work budget before certifying its truncation.
class ResourceError : public std::runtime_error {
  public:
    ResourceError(const std::string& what, double achieved_bound)
        : std::runtime_error(what + " (achieved bound " +
                             std::to_string(achieved_bound) + ")"),
          achieved_bound_(achieved_bound) {}

    double achieved_bound() const noexcept { return achieved_bound_; }

  private:
    double achieved_bound_;
};

/// An enumeration would exceed its hard size cap.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

}  // namespace maxstable
