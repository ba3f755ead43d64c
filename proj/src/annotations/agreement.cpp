#include "annotations/agreement.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "common/error.hpp"

namespace cyents {
namespace {

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

void require_same_docs(const AnnotationSet& a, const AnnotationSet& b) {
  auto it_a = a.entries.begin();
  auto it_b = b.entries.begin();
  for (; it_a != a.entries.end() && it_b != b.entries.end(); ++it_a, ++it_b) {
    if (it_a->first != it_b->first) break;
  }
  if (it_a == a.entries.end() && it_b == b.entries.end()) return;
  const std::string where = it_a != a.entries.end() ? it_a->first : it_b->first;
  throw Error(ErrorCode::kDocMismatch,
              "annotation sets " + a.annotator_id + " and " + b.annotator_id + " differ at document " + where);
}

using Key = std::tuple<std::size_t, std::size_t, std::string>;

std::multiset<Key> keys(const std::vector<Mention>& ms) {
  std::multiset<Key> out;
  for (const auto& m : ms) out.emplace(m.start, m.end, m.label);
  return out;
}

}  // namespace

IAAReport agreement(const AnnotationSet& a, const AnnotationSet& b) {
  require_same_docs(a, b);
  IAAReport r;
  r.annotator_a = a.annotator_id;
  r.annotator_b = b.annotator_id;
  for (const auto& [doc, ms] : a.entries) {
    for (const auto& m : ms) ++r.per_type[m.label].a_count;
    r.count_a += ms.size();
  }
  for (const auto& [doc, ms] : b.entries) {
    for (const auto& m : ms) ++r.per_type[m.label].b_count;
    r.count_b += ms.size();
    auto remaining = keys(a.entries.at(doc));
    for (const auto& m : ms) {
      const auto it = remaining.find(Key{m.start, m.end, m.label});
      if (it == remaining.end()) continue;
      remaining.erase(it);
      ++r.accepted;
      ++r.per_type[m.label].agreed;
    }
  }
  r.total_max = std::max(r.count_a, r.count_b);
  r.acceptance_rate = ratio(r.accepted, r.total_max);
  r.pairwise_f1 = ratio(2 * r.accepted, r.count_a + r.count_b);
  return r;
}

nlohmann::json IAAReport::to_json() const {
  nlohmann::json types = nlohmann::json::object();
  for (const auto& [label, t] : per_type) {
    types[label] = {{"a_count", t.a_count}, {"b_count", t.b_count}, {"agreed", t.agreed}};
  }
  return {{"pair", {annotator_a, annotator_b}},
          {"count_a", count_a},
          {"count_b", count_b},
          {"total_max", total_max},
          {"accepted", accepted},
          {"acceptance_rate", acceptance_rate},
          {"pairwise_f1", pairwise_f1},
          {"per_type_agreement", types}};
}

StudyReport aggregate_study(std::vector<IAAReport> groups) {
  StudyReport s;
  for (const auto& g : groups) {
    s.total_max += g.total_max;
    s.accepted += g.accepted;
  }
  s.acceptance_rate = ratio(s.accepted, s.total_max);
  s.groups = std::move(groups);
  return s;
}

nlohmann::json StudyReport::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : groups) gs.push_back(g.to_json());
  return {{"groups", gs}, {"total_max", total_max}, {"accepted", accepted}, {"acceptance_rate", acceptance_rate}};
}

AnnotationSet merge_group(const std::vector<AnnotationSet>& sets) {
  if (sets.size() < 2) throw Error(ErrorCode::kInvalidArgument, "merge needs at least two annotation sets");
  for (std::size_t i = 1; i < sets.size(); ++i) require_same_docs(sets[0], sets[i]);
  AnnotationSet out;
  out.annotator_id = "accepted";
  for (const auto& [doc, first] : sets[0].entries) {
    auto common = keys(first);
    for (std::size_t i = 1; i < sets.size(); ++i) {
      const auto other = keys(sets[i].entries.at(doc));
      std::multiset<Key> next;
      std::set_intersection(common.begin(), common.end(), other.begin(), other.end(),
                            std::inserter(next, next.end()));
      common = std::move(next);
    }
    auto& dst = out.entries[doc];
    for (const auto& [start, end, label] : common) dst.push_back(Mention{start, end, label, Provenance::kHuman, 1.0});
  }
  return out;
}

std::map<std::string, std::size_t> label_distribution(const AnnotationSet& set) {
  std::map<std::string, std::size_t> out;
  for (const auto& [doc, ms] : set.entries) {
    for (const auto& m : ms) ++out[m.label];
  }
  return out;
}

AnnotationSet restrict_docs(const AnnotationSet& set, const std::vector<std::string>& doc_ids) {
  AnnotationSet out;
  out.annotator_id = set.annotator_id;
  for (const auto& id : doc_ids) {
    const auto it = set.entries.find(id);
    if (it != set.entries.end()) out.entries.insert(*it);
  }
  return out;
}

}  // namespace cyents
