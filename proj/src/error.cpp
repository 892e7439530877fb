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

#include "otsske/error.hpp"

namespace otsske {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedSecurityLevel:
      return "unsupported security level";
    case ErrorCode::kInvalidParameters:
      return "invalid parameters";
    case ErrorCode::kOutOfRange:
      return "out of range";
    case ErrorCode::kInvalidLength:
      return "invalid length";
    case ErrorCode::kInvalidEncoding:
      return "invalid encoding";
    case ErrorCode::kNotInSubgroup:
      return "not in subgroup";
    case ErrorCode::kTruncated:
      return "truncated input";
    case ErrorCode::kRandomnessFailure:
      return "randomness failure";
    case ErrorCode::kSessionConsumed:
      return "session consumed";
    case ErrorCode::kBufferCorrupted:
      return "buffer corrupted";
    case ErrorCode::kBudgetExhausted:
      return "session budget exhausted";
    case ErrorCode::kNoSessionAvailable:
      return "no session available";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kCryptoFailure:
      return "crypto library failure";
  }
  return "unknown error";
}

}  // namespace otsske
