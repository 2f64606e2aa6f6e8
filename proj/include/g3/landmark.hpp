#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace g3 {

/// Caption co-occurrence statistics. A label's own count is its word count.
struct CooccurrenceCounts {
  double total_captions = 0.0;
  std::map<std::string, double> word_count;
  std::map<std::string, std::map<std::string, double>> pair_count;  // label -> word -> count

  double words(const std::string& w) const;
  double pair(const std::string& label, const std::string& w) const;
  /// Throws InvalidInput on negative counts or pairs exceeding a marginal.
  void validate() const;
};

CooccurrenceCounts counts_from_text(const std::string& text);
std::string counts_to_text(const CooccurrenceCounts& c);
CooccurrenceCounts load_counts(const std::filesystem::path& path);
void save_counts(const CooccurrenceCounts& c, const std::filesystem::path& path);

/// Conditional label probabilities given a landmark word.
class LandmarkModel {
 public:
  virtual ~LandmarkModel() = default;
  virtual bool knows(const std::string& word) const = 0;
  virtual double prior(const std::string& word) const = 0;
  virtual double p_label_given_word(const std::string& label, const std::string& word) const = 0;
  virtual double p_label_given_not_word(const std::string& label, const std::string& word) const = 0;
};

/// Estimates from caption counts with additive smoothing (alpha = 1 is
/// Laplace, alpha = 0 gives the raw ratios).
class CountsLandmarkModel final : public LandmarkModel {
 public:
  explicit CountsLandmarkModel(CooccurrenceCounts counts, double alpha = 1.0);
  bool knows(const std::string& word) const override;
  double prior(const std::string& word) const override;
  double p_label_given_word(const std::string& label, const std::string& word) const override;
  double p_label_given_not_word(const std::string& label, const std::string& word) const override;
  const CooccurrenceCounts& counts() const { return counts_; }

 private:
  CooccurrenceCounts counts_;
  double alpha_;
};

/// Explicit probability tables; labels missing from a word's table are
/// uninformative (0.5 under both hypotheses).
class TableLandmarkModel final : public LandmarkModel {
 public:
  struct Entry {
    double given_word = 0.5;
    double given_not_word = 0.5;
  };
  void set_prior(const std::string& word, double p) { priors_[word] = p; }
  void set(const std::string& word, const std::string& label, double given_word, double given_not_word) {
    table_[word][label] = {given_word, given_not_word};
  }
  bool knows(const std::string& word) const override { return priors_.contains(word); }
  double prior(const std::string& word) const override { return priors_.at(word); }
  double p_label_given_word(const std::string& label, const std::string& word) const override;
  double p_label_given_not_word(const std::string& label, const std::string& word) const override;

 private:
  std::map<std::string, double> priors_;
  std::map<std::string, std::map<std::string, Entry>> table_;
};

/// Function words ignored by the landmark models.
bool is_landmark_stop_word(const std::string& word);

/// Words of a landmark phrase that the model scores: known, not stop words.
std::vector<std::string> landmark_words(const LandmarkModel& model, const std::vector<std::string>& words);

/// Naive Bayes: product over words of p(w | o_1..o_K) with labels
/// conditionally independent given the word. Empty label set gives the
/// prior product.
double nb_landmark_prob(const LandmarkModel& model, const std::vector<std::string>& words,
                        const std::set<std::string>& observed);

inline constexpr std::size_t kMaxSalientLabels = 20;

/// Maximum over non-empty subsets of the observed labels. Ties go to the
/// smaller subset, then the lexicographically smaller one.
std::pair<double, std::vector<std::string>> salient_landmark_prob(const LandmarkModel& model,
                                                                  const std::vector<std::string>& words,
                                                                  const std::set<std::string>& observed);

}  // namespace g3
