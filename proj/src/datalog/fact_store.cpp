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

#include "moodlog/datalog/fact_store.hpp"

namespace moodlog::datalog {

namespace {

Tuple project(const Tuple& t, const Relation::Columns& columns) {
  Tuple key;
  key.reserve(columns.size());
  for (std::size_t c : columns) key.push_back(t[c]);
  return key;
}

}  // namespace

bool Relation::insert(Tuple tuple) {
  auto [it, inserted] = tuples_.insert(std::move(tuple));
  if (!inserted) return false;
  const Tuple* stored = &*it;
  for (auto& [columns, index] : indexes_) index[project(*stored, columns)].push_back(stored);
  all_valid_ = false;
  return true;
}

const Relation::Index& Relation::index_for(const Columns& columns) const {
  auto it = indexes_.find(columns);
  if (it != indexes_.end()) return it->second;
  Index index;
  for (const Tuple& t : tuples_) index[project(t, columns)].push_back(&t);
  return indexes_.emplace(columns, std::move(index)).first->second;
}

const Relation::Matches& Relation::lookup(const Columns& columns, const Tuple& key) const {
  if (columns.empty()) {
    if (!all_valid_) {
      all_.clear();
      for (const Tuple& t : tuples_) all_.push_back(&t);
      all_valid_ = true;
    }
    return all_;
  }
  static const Matches kNone;
  const Index& index = index_for(columns);
  auto it = index.find(key);
  return it == index.end() ? kNone : it->second;
}

Relation& FactStore::relation(std::string_view name) {
  auto it = relations_.find(name);
  if (it == relations_.end()) it = relations_.emplace(std::string(name), Relation{}).first;
  return it->second;
}

const Relation* FactStore::find(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

bool FactStore::contains(std::string_view name, const Tuple& tuple) const {
  const Relation* r = find(name);
  return r != nullptr && r->contains(tuple);
}

std::vector<std::string> FactStore::relation_names() const {
  std::vector<std::string> names;
  for (const auto& [name, rel] : relations_) names.push_back(name);
  return names;
}

std::size_t FactStore::total_size() const {
  std::size_t n = 0;
  for (const auto& [name, rel] : relations_) n += rel.size();
  return n;
}

bool FactStore::operator==(const FactStore& other) const {
  auto covers = [](const FactStore& a, const FactStore& b) {
    for (const auto& [name, rel] : a.relations_) {
      const Relation* theirs = b.find(name);
      if (theirs == nullptr ? !rel.empty() : !(*theirs == rel)) return false;
    }
    return true;
  };
  return covers(*this, other) && covers(other, *this);
}

const std::set<Tuple>& query(const FactStore& store, std::string_view relation) {
  const Relation* r = store.find(relation);
  if (r == nullptr) throw UnknownRelation(std::string(relation));
  return r->tuples();
}

}  // namespace moodlog::datalog
