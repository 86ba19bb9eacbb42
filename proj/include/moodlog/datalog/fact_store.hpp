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

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moodlog/datalog/value.hpp"

namespace moodlog::datalog {

// Set of ground tuples with lazily built secondary indexes keyed by a
// column subset. Indexes hold pointers into the tuple set and are kept up to
// date on insertion; copies start without indexes.
class Relation {
 public:
  using Columns = std::vector<std::size_t>;
  using Matches = std::vector<const Tuple*>;

  Relation() = default;
  Relation(const Relation& other) : tuples_(other.tuples_) {}
  Relation(Relation&&) noexcept = default;
  Relation& operator=(const Relation& other) {
    if (this != &other) {
      tuples_ = other.tuples_;
      indexes_.clear();
    }
    return *this;
  }
  Relation& operator=(Relation&&) noexcept = default;

  // Returns true when the tuple was not present before.
  bool insert(Tuple tuple);
  bool contains(const Tuple& tuple) const { return tuples_.contains(tuple); }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  const std::set<Tuple>& tuples() const { return tuples_; }
  auto begin() const { return tuples_.begin(); }
  auto end() const { return tuples_.end(); }

  // Tuples whose projection on `columns` equals `key`. An empty column list
  // returns every tuple.
  const Matches& lookup(const Columns& columns, const Tuple& key) const;

  bool operator==(const Relation& other) const { return tuples_ == other.tuples_; }

 private:
  using Index = std::map<Tuple, Matches>;
  const Index& index_for(const Columns& columns) const;

  std::set<Tuple> tuples_;
  mutable std::map<Columns, Index> indexes_;
  mutable Matches all_;
  mutable bool all_valid_ = false;
};

class UnknownRelation : public std::runtime_error {
 public:
  explicit UnknownRelation(const std::string& relation)
      : std::runtime_error("unknown relation '" + relation + "'"), relation_(relation) {}
  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

// Map from relation name to tuple set. Set semantics throughout.
class FactStore {
 public:
  // Returns the relation, creating an empty one if needed.
  Relation& relation(std::string_view name);
  const Relation* find(std::string_view name) const;
  bool has_relation(std::string_view name) const { return find(name) != nullptr; }

  bool insert(std::string_view name, Tuple tuple) { return relation(name).insert(std::move(tuple)); }
  bool contains(std::string_view name, const Tuple& tuple) const;

  std::vector<std::string> relation_names() const;
  std::size_t total_size() const;

  auto begin() const { return relations_.begin(); }
  auto end() const { return relations_.end(); }

  // Relations that are absent and relations that are empty compare equal.
  bool operator==(const FactStore& other) const;

 private:
  std::map<std::string, Relation, std::less<>> relations_;
};

// Tuple set of a relation present in the store; throws UnknownRelation.
const std::set<Tuple>& query(const FactStore& store, std::string_view relation);

}  // namespace moodlog::datalog
