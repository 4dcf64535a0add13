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

#include <string>
#include <string_view>

#include <json.hpp>

#include "itl/domain.hpp"

namespace itl::io {

using nlohmann::json;

// Parses JSON text; syntax errors become ParseError with line and column.
json parse_json(std::string_view text, const std::string& what);

json to_json(const TypeSystem& types);
// Accepts `sorts` (name -> parent list, or {parents, fixed}) and `objects`.
TypeSystem types_from_json(const json& sorts, const json& objects);

json to_json(const PredicateSignature& sig);
PredicateSignature signature_from_json(const json& j);
// Rejects duplicate names with ParseError.
SignatureTable signatures_from_json(const json& j);

json to_json(const EffectRule& rule);
json to_json(const ActionSchema& schema);
// Quantified variables written as bare names get their sort inferred from
// the first predicate argument slot they occupy.
EffectRule rule_from_json(const json& j, const SignatureTable& sigs);
ActionSchema schema_from_json(const json& j, const SignatureTable& sigs);

json to_json(const State& s);
State state_from_json(const json& j);

}  // namespace itl::io
