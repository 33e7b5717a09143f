//------------------------------------------------------------------------------
//
//   Copyright 2026 tfa-lab contributors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace tfa {

enum class Error : std::uint8_t {
    None = 0,
    DecryptFailure,       // wrong key or tampered box
    BiometricMismatch,    // fuzzy extractor rejected the reading
    PasswordMismatch,     // card-side password check failed
    AuthFailure,          // challenge/response check failed
    IllegalStat,          // status tag not legal for the actor's phase
    UnknownPrincipal,     // identity not present in the actor's store
    VerificationFailure,  // an in-phase equality check failed
    NotFound,
    ParseError,
    IoError,
};

const char* error_name(Error e);

/// Value-or-error carrier for operations whose failure is a protocol
/// outcome rather than a programming error.
template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : val_(std::move(value)) {}
    Result(Error err) : err_(err) {
        if (err == Error::None) throw std::logic_error("Result error cannot be None");
    }

    bool ok() const { return val_.has_value(); }
    explicit operator bool() const { return ok(); }

    Error error() const { return err_; }

    const T& value() const& {
        if (!val_) throw std::logic_error(std::string("Result::value on error: ") + error_name(err_));
        return *val_;
    }
    T& value() & {
        if (!val_) throw std::logic_error(std::string("Result::value on error: ") + error_name(err_));
        return *val_;
    }
    T&& value() && {
        if (!val_) throw std::logic_error(std::string("Result::value on error: ") + error_name(err_));
        return std::move(*val_);
    }

private:
    std::optional<T> val_;
    Error err_ = Error::None;
};

}  // namespace tfa
