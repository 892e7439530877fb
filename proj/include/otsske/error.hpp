// Copyright 2026 The OTS-SKE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTSSKE_ERROR_HPP_
#define OTSSKE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace otsske {

enum class ErrorCode {
  kUnsupportedSecurityLevel,
  kInvalidParameters,
  kOutOfRange,
  kInvalidLength,
  kInvalidEncoding,
  kNotInSubgroup,
  kTruncated,
  kRandomnessFailure,
  kSessionConsumed,
  kBufferCorrupted,
  kBudgetExhausted,
  kNoSessionAvailable,
  kIo,
  kCryptoFailure,  // unexpected failure inside OpenSSL
};

std::string_view error_code_name(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a code, so
// callers (the CLI in particular) can map failures without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace otsske

#endif  // OTSSKE_ERROR_HPP_
