#include "sitegrid/types.hpp"

#include <algorithm>

namespace sitegrid {

const ZipRecord* Dataset::find_zip(std::string_view zip_code) const {
  auto it = std::lower_bound(
      zips.begin(), zips.end(), zip_code,
      [](const ZipRecord& record, std::string_view key) {
        return record.zip_code < key;
      });
  if (it == zips.end() || it->zip_code != zip_code) return nullptr;
  return &*it;
}

const StateRecord* Dataset::find_state(std::string_view state_code) const {
  auto it = std::lower_bound(
      states.begin(), states.end(), state_code,
      [](const StateRecord& record, std::string_view key) {
        return record.state_code < key;
      });
  if (it == states.end() || it->state_code != state_code) return nullptr;
  return &*it;
}

double Dataset::total_existing_installs() const {
  double total = 0.0;
  for (const auto& zip : zips) total += zip.existing_installs;
  return total;
}

}  // namespace sitegrid
