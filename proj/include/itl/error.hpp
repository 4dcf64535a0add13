// Copyright 2026 The ITL Authors. All Rights Reserved.
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

namespace itl {

// Every failure the engine reports carries a stable machine-readable code
// alongside the human message; error frames and CLI reports use the code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define ITL_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

ITL_DEFINE_ERROR(ContractViolation)
ITL_DEFINE_ERROR(ParseError)
ITL_DEFINE_ERROR(SortError)
ITL_DEFINE_ERROR(UnknownAction)
ITL_DEFINE_ERROR(UnknownPredicate)
ITL_DEFINE_ERROR(UnknownObject)
ITL_DEFINE_ERROR(UnknownVerb)
ITL_DEFINE_ERROR(DuplicatePredicate)
ITL_DEFINE_ERROR(ConflictError)
ITL_DEFINE_ERROR(ContiguityError)
ITL_DEFINE_ERROR(NoStateChange)
ITL_DEFINE_ERROR(NoCauseFound)
ITL_DEFINE_ERROR(InconsistentEvidence)

#undef ITL_DEFINE_ERROR

}  // namespace itl
