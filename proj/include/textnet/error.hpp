/*
 * Copyright 2026 The textnet authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textnet {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
	explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration, options or input file contents.
class ConfigError : public Error {
public:
	explicit ConfigError(const std::string &what) : Error(what) {}
};

// A pipeline stage was invoked before the artifacts it consumes exist.
class MissingArtifactError : public Error {
public:
	explicit MissingArtifactError(const std::string &what) : Error(what) {}
};

// Iterative numerics exhausted their iteration budget without converging.
class NumericalError : public Error {
public:
	NumericalError(const std::string &what, std::size_t iterations)
		: Error(what), m_iterations(iterations) {}

	std::size_t iterations() const noexcept {
		return m_iterations;
	}

private:
	std::size_t m_iterations;
};

} // namespace textnet
