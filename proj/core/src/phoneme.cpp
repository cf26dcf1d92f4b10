/*
 * Copyright 2026 The sdrkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdrkit/phoneme.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sdrkit/error.hpp"

namespace sdrkit {
namespace {

const std::unordered_map<std::string, PhonemeCategory>& PhoneTable() {
  static const std::unordered_map<std::string, PhonemeCategory> table = [] {
    std::unordered_map<std::string, PhonemeCategory> t;
    for (const char* p : {"P", "B", "T", "D", "K", "G"}) t[p] = PhonemeCategory::kPlosive;
    for (const char* p : {"F", "V", "TH", "DH", "S", "Z", "SH", "ZH", "HH"})
      t[p] = PhonemeCategory::kFricative;
    for (const char* p : {"M", "N", "NG"}) t[p] = PhonemeCategory::kNasal;
    for (const char* p : {"L", "R", "W", "Y"}) t[p] = PhonemeCategory::kApproximant;
    for (const char* p : {"AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY",
                          "OW", "OY", "UH", "UW"})
      t[p] = PhonemeCategory::kVowel;
    for (const char* p : {"CH", "JH", "SIL", "SP", "SPN"}) t[p] = PhonemeCategory::kOther;
    return t;
  }();
  return table;
}

std::string Normalize(std::string_view phone) {
  std::string s;
  for (char c : phone)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double ParseSeconds(const std::string& field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used == field.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kMalformedHeader,
       "alignment line " + std::to_string(line_no) + ": bad time '" + field + "'");
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

Signal Gather(std::span<const double> x, const std::vector<Span>& spans) {
  Signal out;
  for (const Span& s : spans) out.insert(out.end(), x.begin() + s.begin, x.begin() + s.end);
  return out;
}

MetricReport MeanReport(const std::vector<MetricReport>& reports) {
  MetricReport m;
  const double n = static_cast<double>(reports.size());
  for (const MetricReport& r : reports) {
    m.sir_in += r.sir_in / n;
    m.sir_out += r.sir_out / n;
    m.sar_out += r.sar_out / n;
    m.sdr_out += r.sdr_out / n;
    m.fw_sir_in += r.fw_sir_in / n;
    m.fw_sir_out += r.fw_sir_out / n;
    m.fw_sar_out += r.fw_sar_out / n;
    m.fw_sdr_out += r.fw_sdr_out / n;
  }
  return m;
}

}  // namespace

std::string_view CategoryName(PhonemeCategory c) {
  switch (c) {
    case PhonemeCategory::kPlosive: return "plosive";
    case PhonemeCategory::kFricative: return "fricative";
    case PhonemeCategory::kApproximant: return "approximant";
    case PhonemeCategory::kNasal: return "nasal";
    case PhonemeCategory::kVowel: return "vowel";
    case PhonemeCategory::kOther: return "other";
  }
  return "other";
}

PhonemeCategory Categorize(std::string_view phone) {
  const auto& table = PhoneTable();
  const auto it = table.find(Normalize(phone));
  return it == table.end() ? PhonemeCategory::kOther : it->second;
}

bool IsKnownPhone(std::string_view phone) { return PhoneTable().contains(Normalize(phone)); }

Alignment ParseAlignment(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kMalformedHeader, "alignment CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "start,end,phone")
    Fail(ErrorCode::kMalformedHeader, "alignment CSV header must be 'start,end,phone'");

  Alignment a;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() != 3)
      Fail(ErrorCode::kMalformedHeader,
           "alignment line " + std::to_string(line_no) + ": expected 3 fields");
    PhonemeSegment s{ParseSeconds(f[0], line_no), ParseSeconds(f[1], line_no), f[2],
                     Categorize(f[2])};
    if (!(s.start >= 0.0 && s.start < s.end))
      Fail(ErrorCode::kInvalidArgument,
           "alignment line " + std::to_string(line_no) + ": reversed or negative times");
    if (!IsKnownPhone(s.label)) ++a.unknown_phones;
    a.segments.push_back(std::move(s));
  }
  std::stable_sort(a.segments.begin(), a.segments.end(),
                   [](const PhonemeSegment& x, const PhonemeSegment& y) { return x.start < y.start; });
  for (std::size_t i = 1; i < a.segments.size(); ++i)
    if (a.segments[i].start < a.segments[i - 1].end)
      Fail(ErrorCode::kInvalidArgument,
           "alignment segments overlap at " + std::to_string(a.segments[i].start) + " s");
  return a;
}

Alignment LoadAlignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    if (!std::filesystem::exists(path))
      Fail(ErrorCode::kMissingFile, path.string() + ": no such file");
    Fail(ErrorCode::kIoFailure, path.string() + ": cannot open");
  }
  return ParseAlignment(in);
}

CategoryTable PerCategoryMetrics(std::span<const double> est, std::span<const double> mixture,
                                 std::span<const double> clean, std::span<const double> noise,
                                 int sample_rate, std::span<const PhonemeSegment> segments,
                                 const MetricConfig& config, CategoryAggregation mode) {
  Require(est.size() == mixture.size() && est.size() == clean.size() &&
              est.size() == noise.size(),
          "phoneme metrics: signals must share one length");
  MetricConfig cfg = config;
  cfg.with_stoi = false;

  CategoryTable table;
  std::map<PhonemeCategory, std::vector<Span>> spans;
  const double length = static_cast<double>(est.size());
  for (const PhonemeSegment& s : segments) {
    const double a = std::round(s.start * sample_rate);
    double b = std::round(s.end * sample_rate);
    if (b > length) {
      ++table.truncated_segments;
      b = length;
    }
    if (b <= a) continue;
    spans[s.category].push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
  }

  for (PhonemeCategory c : kAnalysedCategories) {
    auto it = spans.find(c);
    if (it == spans.end()) continue;
    std::vector<Span>& list = it->second;
    std::sort(list.begin(), list.end(), [](const Span& x, const Span& y) { return x.begin < y.begin; });
    CategoryRow row{c, {}};
    if (mode == CategoryAggregation::kConcatenate) {
      row.report = Report(Gather(mixture, list), Gather(est, list), Gather(clean, list),
                          Gather(noise, list), sample_rate, cfg);
    } else {
      std::vector<MetricReport> reports;
      for (const Span& sp : list) {
        const std::vector<Span> one{sp};
        reports.push_back(Report(Gather(mixture, one), Gather(est, one), Gather(clean, one),
                                 Gather(noise, one), sample_rate, cfg));
      }
      row.report = MeanReport(reports);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CategoryTable AverageTables(std::span<const CategoryTable> tables) {
  CategoryTable out;
  for (PhonemeCategory c : kAnalysedCategories) {
    std::vector<MetricReport> reports;
    for (const CategoryTable& t : tables) {
      out.truncated_segments += c == kAnalysedCategories[0] ? t.truncated_segments : 0;
      for (const CategoryRow& r : t.rows)
        if (r.category == c) reports.push_back(r.report);
    }
    if (!reports.empty()) out.rows.push_back({c, MeanReport(reports)});
  }
  return out;
}

std::string PhonemeCsvHeader() {
  return "Loss,Phoneme,SIR_in,SIR_out,SAR_out,SDR_out,FW-SIR_in,FW-SIR_out,FW-SAR_out,FW-SDR_out";
}

std::string PhonemeCsvRow(std::string_view loss_label, const CategoryRow& row) {
  std::string out(loss_label);
  out += ',';
  out += CategoryName(row.category);
  const MetricReport& r = row.report;
  for (double v : {r.sir_in, r.sir_out, r.sar_out, r.sdr_out, r.fw_sir_in, r.fw_sir_out,
                   r.fw_sar_out, r.fw_sdr_out}) {
    out += ',';
    out += FormatCsvNumber(v);
  }
  return out;
}

}  // namespace sdrkit
