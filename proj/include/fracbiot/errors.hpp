/*
 * include/fracbiot/errors.hpp
 *
 * Copyright 2026 The fracbiot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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

namespace fracbiot {

/// Invalid input: bad exponents, geometry, configuration or space requests.
/// The clause string names the violated condition, e.g. "clause (vii)".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string clause, const std::string& message)
        : std::invalid_argument(message), clause_(std::move(clause)) {}
    explicit ValidationError(const std::string& message) : ValidationError("input", message) {}

    const std::string& clause() const { return clause_; }

private:
    std::string clause_;
};

/// A linear solve failed or a numerical precondition broke during a run.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracbiot
