#include "ner/synthetic.hpp"

#include <map>
#include <set>
#include <string>

#include "common/rng.hpp"
#include "common/utf8.hpp"

namespace cyents {
namespace {

const std::vector<std::string> kTemplates = {
    "{Threat_Actor} used {Malware_Name} against targets in {GPE}.",
    "Researchers at {ORG} attributed the {Campaign} campaign to {Threat_Actor}.",
    "The {Malware_Name} loader was delivered through a trojanized {Software_Name} installer.",
    "{ORG} published indicators for {Malware_Name} after the intrusion.",
    "Analysts linked {Threat_Actor} to attacks on banks in {GPE}.",
    "Attackers exploited {Vulnerability} in {Software_Name} to gain initial access.",
    "The operators behind {Campaign} deployed {Malware_Name} on compromised hosts.",
    "A patch for {Vulnerability} was released by {ORG} this week.",
    "{Threat_Actor} has targeted government agencies in {GPE} since the spring.",
    "Samples of {Malware_Name} were uploaded from {GPE} according to {ORG}.",
    "Victims were lured with a fake {Software_Name} update that installed {Malware_Name}.",
    "During {Campaign} the group abused {Vulnerability} to move laterally.",
    "In a new report, {ORG} said {Threat_Actor} relies on {Malware_Name} for persistence.",
    "The flaw known as {Vulnerability} affects every supported release of {Software_Name}.",
    "Officials in {GPE} warned that {Campaign} is still active.",
    "Security teams should block {Malware_Name} and monitor {Software_Name} logs.",
};

const std::vector<std::string> kSyllables = {"ka", "zor", "vex", "lin", "dra", "mo", "quil", "tor", "nex", "sa",
                                             "bri", "gol", "fen", "ru", "xal", "pha", "ver", "tun", "cal", "os",
                                             "mir", "thal", "ze", "pro", "dun", "vi", "kor", "la", "bex", "um"};
const std::vector<std::string> kAnimals = {"Panda", "Bear", "Kitten", "Spider", "Typhoon", "Chollima", "Tempest", "Falcon"};
const std::vector<std::string> kProducts = {"Reader", "Office", "Gateway", "Server", "Studio", "Manager", "Desktop", "Connect"};
const std::vector<std::string> kOrgSuffix = {"Labs", "Security", "Research", "Networks", "Intelligence"};

std::string pseudo_word(Rng& rng) {
  std::string w;
  const std::size_t n = 2 + rng.below(2);
  for (std::size_t i = 0; i < n; ++i) w += kSyllables[rng.below(kSyllables.size())];
  w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

class Inventory {
 public:
  Inventory(std::vector<std::string> words, std::size_t apt_from, std::size_t apt_count)
      : words_(std::move(words)), apt_from_(apt_from), apt_count_(apt_count) {}

  std::string name(const std::string& type, Rng& rng) const {
    const std::string w = words_[rng.below(words_.size())];
    if (type == "Threat_Actor") {
      if (rng.below(4) == 0) return "APT" + std::to_string(apt_from_ + rng.below(apt_count_));
      return w + " " + kAnimals[rng.below(kAnimals.size())];
    }
    if (type == "Software_Name") return w + " " + kProducts[rng.below(kProducts.size())];
    if (type == "ORG") return w + " " + kOrgSuffix[rng.below(kOrgSuffix.size())];
    if (type == "Campaign") return "Operation " + w;
    return w;
  }

 private:
  std::vector<std::string> words_;
  std::size_t apt_from_, apt_count_;
};

SyntheticCorpus render(const std::string& prefix, std::size_t sentences, std::size_t per_doc, const Inventory& inv,
                       Rng& rng) {
  SyntheticCorpus c;
  c.gold.annotator_id = "synthetic";
  std::string text;
  std::vector<Mention> mentions;
  std::size_t doc_no = 0;
  auto flush = [&] {
    if (text.empty()) return;
    const std::string id = prefix + std::to_string(doc_no++);
    c.docs.push_back(make_document(id, text));
    c.gold.entries[id] = mentions;
    text.clear();
    mentions.clear();
  };
  for (std::size_t s = 0; s < sentences; ++s) {
    if (!text.empty()) text += ' ';
    const std::string& tpl = kTemplates[rng.below(kTemplates.size())];
    for (std::size_t i = 0; i < tpl.size();) {
      if (tpl[i] != '{') {
        text += tpl[i++];
        continue;
      }
      const std::size_t close = tpl.find('}', i);
      const std::string type = tpl.substr(i + 1, close - i - 1);
      const std::string value = inv.name(type, rng);
      const std::size_t start = utf8_length(text);
      text += value;
      mentions.push_back(Mention{start, start + utf8_length(value), type, Provenance::kHuman, 1.0});
      i = close + 1;
    }
    if ((s + 1) % per_doc == 0) flush();
  }
  flush();
  return c;
}

}  // namespace

SyntheticSplit make_synthetic_corpus(std::size_t train_sentences, std::size_t heldout_sentences, std::uint64_t seed,
                                     std::size_t sentences_per_doc) {
  Rng rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> pool;
  while (pool.size() < 400) {
    std::string w = pseudo_word(rng);
    if (seen.insert(w).second) pool.push_back(std::move(w));
  }
  const Inventory train_inv({pool.begin(), pool.begin() + 300}, 1, 75);
  const Inventory heldout_inv({pool.begin() + 300, pool.end()}, 76, 24);
  SyntheticSplit out;
  out.train = render("syn-train-", train_sentences, sentences_per_doc, train_inv, rng);
  out.heldout = render("syn-heldout-", heldout_sentences, sentences_per_doc, heldout_inv, rng);
  return out;
}

}  // namespace cyents
