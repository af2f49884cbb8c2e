#include "caplab/layout.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "caplab/errors.hpp"

namespace caplab {

SubsystemLayout::SubsystemLayout(std::initializer_list<Factor> factors)
    : factors_(factors) {
  init();
}

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  init();
}

void SubsystemLayout::init() {
  std::unordered_set<std::string> seen;
  total_dim_ = 1;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw layout_error("factor '" + f.label + "' has dimension < 1");
    if (!seen.insert(f.label).second)
      throw layout_error("duplicate factor label '" + f.label + "'");
    total_dim_ *= f.dim;
  }
  strides_.assign(factors_.size(), 1);
  for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * factors_[i + 1].dim;
}

bool SubsystemLayout::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

int SubsystemLayout::position(const std::string& label) const {
  for (int i = 0; i < num_factors(); ++i)
    if (factors_[i].label == label) return i;
  throw layout_error("no factor labelled '" + label + "' in " + to_string());
}

int SubsystemLayout::dim(const std::string& label) const {
  return factors_[position(label)].dim;
}

long SubsystemLayout::dim_of(const std::vector<std::string>& labels) const {
  long d = 1;
  for (const auto& l : labels) d *= dim(l);
  return d;
}

SubsystemLayout SubsystemLayout::subset(const std::vector<std::string>& labels) const {
  std::vector<Factor> kept;
  for (const auto& f : factors_) {
    if (std::find(labels.begin(), labels.end(), f.label) != labels.end())
      kept.push_back(f);
  }
  if (kept.size() != labels.size())
    throw layout_error("subset labels not all present in " + to_string());
  return SubsystemLayout(kept);
}

std::vector<std::string> SubsystemLayout::complement(
    const std::vector<std::string>& labels) const {
  for (const auto& l : labels) position(l);  // validate
  std::vector<std::string> rest;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end())
      rest.push_back(f.label);
  return rest;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

std::vector<int> SubsystemLayout::digits(long index) const {
  std::vector<int> d(factors_.size());
  for (size_t i = 0; i < factors_.size(); ++i) {
    d[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return d;
}

long SubsystemLayout::index(const std::vector<int>& digits) const {
  long idx = 0;
  for (size_t i = 0; i < factors_.size(); ++i) idx += digits[i] * strides_[i];
  return idx;
}

bool SubsystemLayout::operator==(const SubsystemLayout& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label != other.factors_[i].label ||
        factors_[i].dim != other.factors_[i].dim)
      return false;
  return true;
}

std::string SubsystemLayout::to_string() const {
  std::ostringstream ss;
  ss << "(";
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) ss << ", ";
    ss << factors_[i].label << ":" << factors_[i].dim;
  }
  ss << ")";
  return ss.str();
}

}  // namespace caplab
