// Copyright 2026 The thinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace thinlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Weights that do not sum to one within tolerance.
class NormalizationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Entropy target not reachable on the requested support.
class InfeasibleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Iterative solver gave up. `trace` holds a human-readable diagnostic.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::string trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::string& trace() const noexcept { return trace_; }

private:
    std::string trace_;
};

/// Malformed input file. Line and column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace thinlab
