/*
 * include/fracbiot/io.hpp
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

#include <filesystem>
#include <string>
#include <vector>

namespace fracbiot {

/// Locale-independent text of a double with 17 significant digits.
std::string format_double(double value);

/// Writes one CSV row; values are already formatted.
std::string csv_row(const std::vector<std::string>& cells);

/// Creates the directory if needed and throws ValidationError if that fails.
void ensure_directory(const std::filesystem::path& dir);

/// 64-bit FNV-1a digest of a string, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace fracbiot
