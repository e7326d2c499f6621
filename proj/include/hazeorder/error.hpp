// Copyright 2026 The hazeorder Authors. All Rights Reserved.
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

#ifndef HAZEORDER_ERROR_HPP_
#define HAZEORDER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hazeorder {

enum class ErrorCode {
  kConfig = 1,      // invalid parameter (window size, epsilon, unknown name)
  kStructural = 2,  // dimension or length mismatch
  kIo = 3,          // unreadable, truncated or unwritable file
  kValidation = 4,  // value outside the documented domain
  kUnsupported = 5, // format or channel layout not handled
};

const char* error_code_name(ErrorCode code);

// All library failures are reported as this exception type. The C layer maps
// the code one-to-one onto hz_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hazeorder

#endif  // HAZEORDER_ERROR_HPP_
