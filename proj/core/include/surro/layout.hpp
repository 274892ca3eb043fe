#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace surro {

/// Coordinate map for the state vector: a shared block of named effects
/// followed by one random-walk level per subject. Names map injectively to
/// shared positions.
class StateLayout {
 public:
  int add(const std::string& name);  // returns the new shared index
  int at(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) > 0; }

  int shared_dim() const { return static_cast<int>(names_.size()); }
  int n_subjects() const { return n_subjects_; }
  void set_n_subjects(int n) { n_subjects_ = n; }
  int subject_state(int subject) const { return shared_dim() + subject; }
  int total_dim() const { return shared_dim() + n_subjects_; }

  const std::vector<std::string>& shared_names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  int n_subjects_ = 0;
};

}  // namespace surro
