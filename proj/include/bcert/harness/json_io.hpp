// Copyright 2026 The bcert Authors
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

// JSON encoding of matrices and vectors. Complex entries are [re, im] pairs
// in row-major nested arrays; plain numbers are accepted as real entries.

#pragma once

#include <string>

#include "json.hpp"

#include "bcert/linalg.hpp"

namespace bcert::harness {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& what);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& what);

Json real_vector_to_json(const RealVector& v);
RealVector real_vector_from_json(const Json& j, const std::string& what);

/// Reads a JSON document from a file; ValidationError on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// Writes with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace bcert::harness
