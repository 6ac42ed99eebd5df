#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace floorgnn {

// Ordered room-category labels with a stable label -> index mapping.
class CategoryVocab {
 public:
  CategoryVocab() = default;
  explicit CategoryVocab(std::vector<std::string> labels);

  // living_room, kitchen, bedroom, bathroom, balcony, closet, corridor,
  // dining_room
  static CategoryVocab default_categories();

  int index_of(const std::string& label) const;  // E_UNKNOWN_CATEGORY
  bool contains(const std::string& label) const;
  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace floorgnn
