// Copyright 2026 The Moodlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "moodlog/datalog/ast.hpp"
#include "moodlog/datalog/fact_store.hpp"
#include "moodlog/patient/record.hpp"

namespace moodlog::patient {

// Dataset table: header `id kind name value`, then one tab-separated row per
// observed symptom, history condition, expected disorder and expected
// episode. Rows of one patient are contiguous. "-" stands for "none" in the
// expected_* rows. Throws DataError with origin:line.
PatientDataset parse_patient_table(std::string_view text, std::string_view origin = "<table>");
PatientDataset load_patient_table(const std::filesystem::path& path);

// Inverse of parse_patient_table; a record with no facts and no labels has
// no rows and is dropped.
std::string format_patient_table(const PatientDataset& dataset);
void save_patient_table(const PatientDataset& dataset, const std::filesystem::path& path);

// Reads `<Relation>.facts` files (tab-separated, no header) for the declared
// relations of `program`. Every declared input relation is present in the
// result, possibly empty. Files for undeclared relations are rejected.
datalog::FactStore load_facts_dir(const std::filesystem::path& dir, const datalog::Program& program);

// Parses one relation's rows; `types` gives the column types.
void parse_facts(std::string_view text, const std::vector<datalog::ValueType>& types, datalog::Relation& into,
                 std::string_view origin);

// Rows sorted, symbols bare, floats with a decimal point, `\n` endings.
std::string format_relation(const datalog::Relation& relation);

// Writes `<name><extension>` for each relation in `names`.
void write_relations(const datalog::FactStore& store, const std::vector<std::string>& names,
                     const std::filesystem::path& dir, std::string_view extension);

}  // namespace moodlog::patient
