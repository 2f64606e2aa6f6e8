#include "g3/landmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "g3/error.hpp"
#include "g3/language.hpp"
#include "g3/world_io.hpp"

namespace g3 {

double CooccurrenceCounts::words(const std::string& w) const {
  auto it = word_count.find(w);
  return it == word_count.end() ? 0.0 : it->second;
}

double CooccurrenceCounts::pair(const std::string& label, const std::string& w) const {
  auto it = pair_count.find(label);
  if (it == pair_count.end()) return 0.0;
  auto jt = it->second.find(w);
  return jt == it->second.end() ? 0.0 : jt->second;
}

void CooccurrenceCounts::validate() const {
  if (total_captions < 0.0) throw InvalidInput("negative caption total");
  for (const auto& [w, c] : word_count)
    if (c < 0.0 || c > total_captions) throw InvalidInput("word count out of range for '" + w + "'");
  for (const auto& [label, row] : pair_count)
    for (const auto& [w, c] : row)
      if (c < 0.0 || c > std::min(words(label), words(w)))
        throw InvalidInput("pair count (" + label + ", " + w + ") exceeds a marginal");
}

CooccurrenceCounts counts_from_text(const std::string& text) {
  CooccurrenceCounts c;
  try {
    const Json j = Json::parse(text);
    c.total_captions = j.at("total_captions").get<double>();
    c.word_count = j.at("words").get<std::map<std::string, double>>();
    c.pair_count = j.value("pairs", Json::object()).get<std::map<std::string, std::map<std::string, double>>>();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed counts file: ") + e.what());
  }
  c.validate();
  return c;
}

std::string counts_to_text(const CooccurrenceCounts& c) {
  Json j;
  j["total_captions"] = c.total_captions;
  j["words"] = Json(c.word_count);
  j["pairs"] = Json(c.pair_count);
  return j.dump(1) + "\n";
}

CooccurrenceCounts load_counts(const std::filesystem::path& path) { return counts_from_text(read_text_file(path)); }

void save_counts(const CooccurrenceCounts& c, const std::filesystem::path& path) {
  write_text_file(path, counts_to_text(c));
}

CountsLandmarkModel::CountsLandmarkModel(CooccurrenceCounts counts, double alpha)
    : counts_(std::move(counts)), alpha_(alpha) {
  counts_.validate();
  if (alpha_ < 0.0) throw InvalidInput("smoothing must be non-negative");
}

bool CountsLandmarkModel::knows(const std::string& word) const { return counts_.words(word) > 0.0; }

double CountsLandmarkModel::prior(const std::string& word) const {
  return (counts_.words(word) + alpha_) / (counts_.total_captions + 2.0 * alpha_);
}

double CountsLandmarkModel::p_label_given_word(const std::string& label, const std::string& word) const {
  return (counts_.pair(label, word) + alpha_) / (counts_.words(word) + 2.0 * alpha_);
}

double CountsLandmarkModel::p_label_given_not_word(const std::string& label, const std::string& word) const {
  const double with_label = counts_.words(label) - counts_.pair(label, word);
  return (with_label + alpha_) / (counts_.total_captions - counts_.words(word) + 2.0 * alpha_);
}

double TableLandmarkModel::p_label_given_word(const std::string& label, const std::string& word) const {
  auto it = table_.find(word);
  if (it == table_.end()) return 0.5;
  auto jt = it->second.find(label);
  return jt == it->second.end() ? 0.5 : jt->second.given_word;
}

double TableLandmarkModel::p_label_given_not_word(const std::string& label, const std::string& word) const {
  auto it = table_.find(word);
  if (it == table_.end()) return 0.5;
  auto jt = it->second.find(label);
  return jt == it->second.end() ? 0.5 : jt->second.given_not_word;
}

bool is_landmark_stop_word(const std::string& word) {
  static const std::set<std::string> stop{"of", "to", "in", "on", "at", "by", "with", "and", "or", "near",
                                          "next", "you", "your", "it", "its", "there", "here", "end", "side"};
  return is_determiner(word) || stop.contains(word);
}

std::vector<std::string> landmark_words(const LandmarkModel& model, const std::vector<std::string>& words) {
  std::vector<std::string> out;
  for (const std::string& w : words)
    if (!is_landmark_stop_word(w) && model.knows(w)) out.push_back(w);
  return out;
}

namespace {

double word_posterior(const LandmarkModel& m, const std::string& w, const std::vector<const std::string*>& labels) {
  const double pw = m.prior(w);
  double a = std::log(pw), b = std::log1p(-pw);
  for (const std::string* o : labels) {
    a += std::log(m.p_label_given_word(*o, w));
    b += std::log(m.p_label_given_not_word(*o, w));
  }
  if (a == -std::numeric_limits<double>::infinity() && b == a) return pw;
  return 1.0 / (1.0 + std::exp(b - a));
}

double nb_subset(const LandmarkModel& m, const std::vector<std::string>& words,
                 const std::vector<const std::string*>& labels) {
  double p = 1.0;
  for (const std::string& w : words) p *= labels.empty() ? m.prior(w) : word_posterior(m, w, labels);
  return p;
}

}  // namespace

double nb_landmark_prob(const LandmarkModel& model, const std::vector<std::string>& words,
                        const std::set<std::string>& observed) {
  std::vector<const std::string*> labels;
  for (const std::string& o : observed) labels.push_back(&o);
  return nb_subset(model, landmark_words(model, words), labels);
}

std::pair<double, std::vector<std::string>> salient_landmark_prob(const LandmarkModel& model,
                                                                  const std::vector<std::string>& words,
                                                                  const std::set<std::string>& observed) {
  if (observed.size() > kMaxSalientLabels)
    throw InvalidInput("too many observed labels for subset search (" + std::to_string(observed.size()) + ")");
  const std::vector<std::string> kept = landmark_words(model, words);
  const std::vector<std::string> labels(observed.begin(), observed.end());
  if (labels.empty()) return {nb_subset(model, kept, {}), {}};

  double best = -1.0;
  std::vector<std::string> best_set;
  const std::uint32_t full = (std::uint32_t{1} << labels.size()) - 1;
  std::vector<const std::string*> subset;
  std::vector<std::string> names;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    subset.clear();
    names.clear();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) {
        subset.push_back(&labels[i]);
        names.push_back(labels[i]);
      }
    const double p = nb_subset(model, kept, subset);
    const bool better = p > best || (p == best && (names.size() < best_set.size() ||
                                                   (names.size() == best_set.size() && names < best_set)));
    if (better) {
      best = p;
      best_set = names;
    }
  }
  return {best, best_set};
}

}  // namespace g3
