/*
 * Copyright 2026 The qfchain Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfchain {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input violates a structural invariant (antisymmetry, orthogonality, purity, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Model catalog lookup or parameter problems.
class ModelError : public Error {
  public:
    using Error::Error;
};

/// A site or window lies outside the region a computation may touch.
class WindowError : public Error {
  public:
    using Error::Error;
};

/// The one-particle spectrum has bulk zero modes; the quasi-free ground state
/// is not unique. Carries the offending single-particle energies.
class DegenerateGroundState : public Error {
  public:
    DegenerateGroundState(const std::string& what, std::vector<double> energies)
        : Error(what), energies_(std::move(energies)) {}

    const std::vector<double>& energies() const noexcept { return energies_; }
    bool critical() const noexcept { return true; }

  private:
    std::vector<double> energies_;
};

/// The split property could not be established, so the Z2 index is refused.
class IndexUndefined : public Error {
  public:
    using Error::Error;
};

/// Configuration file problems. `path()` is a JSON pointer into the config.
class ConfigError : public Error {
  public:
    ConfigError(std::string path, const std::string& what)
        : Error((path.empty() ? "/" : path) + ": " + what), path_(std::move(path)), message_(what) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& message() const noexcept { return message_; }

  private:
    std::string path_;
    std::string message_;
};

}  // namespace qfchain
