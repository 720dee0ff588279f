#include "pyspecies/data.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <unordered_map>

#include "pyspecies/errors.hpp"

namespace pyspecies {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

constexpr std::int64_t max_count = std::int64_t{1} << 53;

// Splits "a,b" at the last comma; labels may themselves contain commas.
bool split_pair(std::string_view line, std::string_view& left, std::string_view& right) {
  const auto pos = line.rfind(',');
  if (pos == std::string_view::npos) return false;
  left = trim(line.substr(0, pos));
  right = trim(line.substr(pos + 1));
  return true;
}

}  // namespace

SampleSummary::SampleSummary(Fingerprint fp) : fingerprint_(std::move(fp)) {
  for (auto it = fingerprint_.begin(); it != fingerprint_.end();) {
    if (it->second == 0)
      it = fingerprint_.erase(it);
    else
      ++it;
  }
  for (const auto& [r, m] : fingerprint_) {
    if (r > max_count / m || n_ > max_count - r * m)
      throw DomainError("sample size exceeds 2^53");
    n_ += r * m;
    k_ += m;
  }
  if (k_ == 0) throw DomainError("empty sample");
}

SampleSummary SampleSummary::from_labels(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw DomainError("from_labels: empty input");
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& t : tokens) ++counts[t];
  Fingerprint fp;
  for (const auto& [label, c] : counts) ++fp[c];
  return SampleSummary(std::move(fp));
}

SampleSummary SampleSummary::from_label_counts(
    const std::vector<std::pair<std::string, std::int64_t>>& rows) {
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& [label, c] : rows) {
    if (c < 0) throw DomainError("negative count for label " + label);
    counts[label] += c;
  }
  Fingerprint fp;
  for (const auto& [label, c] : counts)
    if (c > 0) ++fp[c];
  if (fp.empty()) throw DomainError("from_label_counts: no positive counts");
  return SampleSummary(std::move(fp));
}

SampleSummary SampleSummary::from_frequencies(std::vector<std::int64_t> frequencies) {
  Fingerprint fp;
  for (auto f : frequencies) {
    if (f < 1) throw DomainError("frequencies must be positive");
    ++fp[f];
  }
  if (fp.empty()) throw DomainError("from_frequencies: empty input");
  return SampleSummary(std::move(fp));
}

SampleSummary SampleSummary::from_fingerprint(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
  Fingerprint fp;
  for (const auto& [r, m] : pairs) {
    if (r < 1) throw DomainError("fingerprint frequency r must be >= 1");
    if (m < 0) throw DomainError("fingerprint count m_r must be >= 0");
    if (!fp.emplace(r, m).second)
      throw DomainError("duplicate fingerprint entry r = " + std::to_string(r));
  }
  bool any = false;
  for (const auto& [r, m] : fp) any |= m > 0;
  if (!any) throw DomainError("fingerprint has no species (all m_r are zero)");
  return SampleSummary(std::move(fp));
}

std::int64_t SampleSummary::m(std::int64_t r) const {
  auto it = fingerprint_.find(r);
  return it == fingerprint_.end() ? 0 : it->second;
}

std::vector<std::int64_t> SampleSummary::frequencies() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k_));
  for (auto it = fingerprint_.rbegin(); it != fingerprint_.rend(); ++it)
    out.insert(out.end(), static_cast<std::size_t>(it->second), it->first);
  return out;
}

std::uint64_t SampleSummary::fingerprint_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [r, m] : fingerprint_) {
    mix(static_cast<std::uint64_t>(r));
    mix(static_cast<std::uint64_t>(m));
  }
  return h;
}

InputFormat parse_input_format(std::string_view name) {
  if (name == "labels") return InputFormat::labels;
  if (name == "counts") return InputFormat::counts;
  if (name == "fingerprint") return InputFormat::fingerprint;
  throw ParseError("unknown input format '" + std::string(name) + "'", 0);
}

SampleSummary read_labels(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (!t.empty()) tokens.emplace_back(t);
  }
  if (tokens.empty()) throw ParseError("no labels in input", 0);
  return SampleSummary::from_labels(tokens);
}

SampleSummary read_label_counts(std::istream& in) {
  std::vector<std::pair<std::string, std::int64_t>> rows;
  std::string line;
  std::int64_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    std::string_view label, count;
    std::int64_t c = 0;
    if (!split_pair(t, label, count)) throw ParseError("expected 'label,count'", lineno);
    if (!parse_int(count, c)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("count is not an integer: '" + std::string(count) + "'", lineno);
    }
    header_allowed = false;
    if (c < 0) throw ParseError("negative count", lineno);
    if (label.empty()) throw ParseError("empty label", lineno);
    rows.emplace_back(std::string(label), c);
  }
  if (rows.empty()) throw ParseError("no rows in input", 0);
  try {
    return SampleSummary::from_label_counts(rows);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

SampleSummary read_fingerprint(std::istream& in) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  std::set<std::int64_t> seen;
  std::string line;
  std::int64_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    std::string_view a, b;
    std::int64_t r = 0, m = 0;
    if (!split_pair(t, a, b)) throw ParseError("expected 'r,m_r'", lineno);
    if (!parse_int(a, r) || !parse_int(b, m)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError("expected two integers 'r,m_r'", lineno);
    }
    header_allowed = false;
    if (r < 1) throw ParseError("frequency r must be >= 1", lineno);
    if (m < 0) throw ParseError("count m_r must be >= 0", lineno);
    if (!seen.insert(r).second) throw ParseError("duplicate r = " + std::to_string(r), lineno);
    pairs.emplace_back(r, m);
  }
  if (pairs.empty()) throw ParseError("no rows in input", 0);
  try {
    return SampleSummary::from_fingerprint(pairs);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), 0);
  }
}

SampleSummary read_sample(std::istream& in, InputFormat format) {
  switch (format) {
    case InputFormat::labels: return read_labels(in);
    case InputFormat::counts: return read_label_counts(in);
    case InputFormat::fingerprint: return read_fingerprint(in);
  }
  throw ParseError("unknown input format", 0);
}

SampleSummary read_sample_file(const std::string& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'", 0);
  return read_sample(in, format);
}

}  // namespace pyspecies
