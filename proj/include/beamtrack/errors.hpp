/*
   Copyright 2026 The beamtrack Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beamtrack {

// Precondition violation on a physical or geometric quantity.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Normalization sum collapsed to zero; no unit-power precoder exists.
class DegenerateParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    // 1-based; 0 when the location is unknown.
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

class CodebookError : public std::runtime_error {
public:
    enum class Kind {
        version_mismatch,
        fingerprint_mismatch,
        corrupt_payload,
        out_of_range,
        build_failure,
    };

    CodebookError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal diagnostics and returns the
// previous one. The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

} // namespace beamtrack
