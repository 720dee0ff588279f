#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pyspecies/pyp.hpp"

namespace pyspecies {

// Sufficient statistics of an observed sample. Frequencies are kept sorted
// in decreasing order so that equal samples compare equal regardless of the
// order in which species were first seen.
class SampleSummary {
public:
  static SampleSummary from_labels(const std::vector<std::string>& tokens);
  static SampleSummary from_label_counts(const std::vector<std::pair<std::string, std::int64_t>>& rows);
  static SampleSummary from_frequencies(std::vector<std::int64_t> frequencies);
  static SampleSummary from_fingerprint(const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs);

  std::int64_t n() const { return n_; }
  std::int64_t k() const { return k_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  // m_r, zero when absent.
  std::int64_t m(std::int64_t r) const;
  // Expanded frequency list; may be large for fingerprint input.
  std::vector<std::int64_t> frequencies() const;
  // FNV-1a hash of the fingerprint, for report digests.
  std::uint64_t fingerprint_hash() const;

private:
  explicit SampleSummary(Fingerprint fp);

  std::int64_t n_ = 0;
  std::int64_t k_ = 0;
  Fingerprint fingerprint_;
};

enum class InputFormat { labels, counts, fingerprint };

InputFormat parse_input_format(std::string_view name);

// Readers raise ParseError with the 1-based line number of the bad row.
SampleSummary read_labels(std::istream& in);
SampleSummary read_label_counts(std::istream& in);
SampleSummary read_fingerprint(std::istream& in);
SampleSummary read_sample(std::istream& in, InputFormat format);
SampleSummary read_sample_file(const std::string& path, InputFormat format);

}  // namespace pyspecies
