#include "floorgnn/vocab.hpp"

#include "floorgnn/error.hpp"

namespace floorgnn {

CategoryVocab::CategoryVocab(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) fail(ErrorCode::bad_config, "vocab has no labels");
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) fail(ErrorCode::bad_config, "vocab label is empty");
    auto [it, inserted] = index_.emplace(labels_[i], static_cast<int>(i));
    if (!inserted) fail(ErrorCode::bad_config, "duplicate vocab label: " + labels_[i]);
  }
}

CategoryVocab CategoryVocab::default_categories() {
  return CategoryVocab({"living_room", "kitchen", "bedroom", "bathroom", "balcony",
                        "closet", "corridor", "dining_room"});
}

int CategoryVocab::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end())
    fail(ErrorCode::unknown_category, "category not in vocab: " + label);
  return it->second;
}

bool CategoryVocab::contains(const std::string& label) const {
  return index_.find(label) != index_.end();
}

}  // namespace floorgnn
