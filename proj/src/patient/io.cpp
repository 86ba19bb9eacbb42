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
#include "moodlog/patient/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace moodlog::patient {

namespace fs = std::filesystem;
using datalog::Value;
using datalog::ValueType;

namespace {

constexpr std::string_view kHeader = "id\tkind\tname\tvalue";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot write");
  out << text;
}

// Calls `row(line_number, line)` for every non-empty line.
template <class F>
void for_each_line(std::string_view text, F row) {
  int number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty()) row(number, line);
    start = end + 1;
  }
}

class TableParser {
 public:
  explicit TableParser(std::string_view origin) : origin_(origin) {}

  PatientDataset parse(std::string_view text) {
    bool header = false;
    for_each_line(text, [&](int number, std::string_view line) {
      line_ = number;
      if (!header) {
        check_header(line);
        header = true;
        return;
      }
      row(line);
    });
    if (!header) fail("missing header line");
    return std::move(dataset_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw DataError(std::string(origin_) + ":" + std::to_string(line_) + ": " + message);
  }

  void check_header(std::string_view line) {
    if (line == kHeader) return;
    auto columns = split(line, '\t');
    auto expected = split(kHeader, '\t');
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i >= expected.size()) fail("unknown column '" + std::string(columns[i]) + "'");
      if (columns[i] != expected[i]) fail("unknown column '" + std::string(columns[i]) + "', expected '" +
                                          std::string(expected[i]) + "'");
    }
    fail("missing column '" + std::string(expected[columns.size()]) + "'");
  }

  PatientRecord& record_for(std::string_view id) {
    if (id.empty()) fail("empty patient id");
    if (!dataset_.records.empty() && dataset_.records.back().id == id) return dataset_.records.back();
    if (!seen_.insert(std::string(id)).second) fail("duplicate id '" + std::string(id) + "'");
    dataset_.records.push_back(PatientRecord{std::string(id), {}, {}});
    return dataset_.records.back();
  }

  void row(std::string_view line) {
    auto fields = split(line, '\t');
    if (fields.size() != 4) fail("expected 4 columns, found " + std::to_string(fields.size()));
    auto [id, kind, name, value] = std::tie(fields[0], fields[1], fields[2], fields[3]);
    PatientRecord& record = record_for(id);
    if (kind == "observed") {
      auto weeks = datalog::parse_field(value, ValueType::floating);
      if (!weeks) fail("cannot parse weeks '" + std::string(value) + "'");
      record.observed.push_back({std::string(name), weeks->as_float()});
    } else if (kind == "history") {
      auto count = datalog::parse_field(value, ValueType::number);
      if (!count) fail("cannot parse count '" + std::string(value) + "'");
      record.history.push_back({std::string(name), count->as_number()});
    } else if (kind == "expected_disorder") {
      if (!value.empty()) fail("expected_disorder rows take no value");
      Label& label = dataset_.labels[record.id];
      if (label.disorder) fail("second expected_disorder for '" + record.id + "'");
      label.disorder = name == "-" ? "" : std::string(name);
    } else if (kind == "expected_episode") {
      if (!value.empty()) fail("expected_episode rows take no value");
      Label& label = dataset_.labels[record.id];
      bool first = !label.episodes.has_value();
      if (first) label.episodes.emplace();
      if (name == "-") {
        if (!first) fail("'-' episode combined with other episodes");
        none_.insert(record.id);
      } else {
        if (none_.contains(record.id)) fail("'-' episode combined with other episodes");
        EpisodeSet before = *label.episodes;
        if (!set_episode(*label.episodes, name)) fail("unknown episode '" + std::string(name) + "'");
        if (before == *label.episodes) fail("episode '" + std::string(name) + "' listed twice");
      }
    } else {
      fail("unknown kind '" + std::string(kind) + "'");
    }
  }

  std::string_view origin_;
  int line_ = 0;
  PatientDataset dataset_;
  std::set<std::string> seen_;
  std::set<std::string> none_;
};

void check_field(std::string_view text, const std::string& what) {
  if (text.find_first_of("\t\n") != std::string_view::npos) {
    throw DataError(what + " '" + std::string(text) + "' contains a tab or newline");
  }
}

}  // namespace

PatientDataset parse_patient_table(std::string_view text, std::string_view origin) {
  return TableParser(origin).parse(text);
}

PatientDataset load_patient_table(const fs::path& path) {
  return parse_patient_table(read_file(path), path.string());
}

std::string format_patient_table(const PatientDataset& dataset) {
  for (const auto& [id, label] : dataset.labels) {
    if (!dataset.find(id)) throw DataError("label for unknown patient '" + id + "'");
  }
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : dataset.records) {
    check_field(r.id, "patient id");
    auto emit = [&](std::string_view kind, std::string_view name, std::string_view value) {
      check_field(name, std::string(kind));
      out.append(r.id).append("\t").append(kind).append("\t").append(name).append("\t").append(value) += '\n';
    };
    for (const auto& o : r.observed) emit("observed", o.symptom, datalog::format_float(o.weeks));
    for (const auto& h : r.history) emit("history", h.condition, std::to_string(h.count));
    const Label* label = dataset.label(r.id);
    if (!label) continue;
    if (label->disorder) emit("expected_disorder", label->disorder->empty() ? "-" : *label->disorder, "");
    if (label->episodes) {
      auto names = episode_names(*label->episodes);
      if (names.empty()) emit("expected_episode", "-", "");
      for (const auto& name : names) emit("expected_episode", name, "");
    }
  }
  return out;
}

void save_patient_table(const PatientDataset& dataset, const fs::path& path) {
  write_file(path, format_patient_table(dataset));
}

void parse_facts(std::string_view text, const std::vector<ValueType>& types, datalog::Relation& into,
                 std::string_view origin) {
  for_each_line(text, [&](int number, std::string_view line) {
    auto where = [&] { return std::string(origin) + ":" + std::to_string(number) + ": "; };
    auto fields = split(line, '\t');
    if (fields.size() != types.size()) {
      throw DataError(where() + "expected " + std::to_string(types.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    datalog::Tuple tuple;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      auto v = datalog::parse_field(fields[i], types[i]);
      if (!v) {
        throw DataError(where() + "cannot parse '" + std::string(fields[i]) + "' as " +
                        std::string(datalog::type_name(types[i])));
      }
      tuple.push_back(std::move(*v));
    }
    into.insert(std::move(tuple));
  });
}

datalog::FactStore load_facts_dir(const fs::path& dir, const datalog::Program& program) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError(dir.string() + ": not a directory");
  datalog::FactStore store;
  for (const auto& input : program.inputs) store.relation(input.name);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".facts") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string name = file.stem().string();
    const datalog::Declaration* decl = program.find_declaration(name);
    if (!decl) throw DataError(file.string() + ": relation '" + name + "' is not declared");
    std::vector<ValueType> types;
    for (const auto& p : decl->params) types.push_back(p.type);
    parse_facts(read_file(file), types, store.relation(name), file.string());
  }
  return store;
}

std::string format_relation(const datalog::Relation& relation) {
  std::string out;
  for (const auto& tuple : relation) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i > 0) out += '\t';
      std::string field = datalog::format_value(tuple[i], false);
      check_field(field, "value");
      out += field;
    }
    out += '\n';
  }
  return out;
}

void write_relations(const datalog::FactStore& store, const std::vector<std::string>& names, const fs::path& dir,
                     std::string_view extension) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": " + ec.message());
  for (const auto& name : names) {
    const datalog::Relation* relation = store.find(name);
    write_file(dir / (name + std::string(extension)), relation ? format_relation(*relation) : std::string());
  }
}

}  // namespace moodlog::patient
