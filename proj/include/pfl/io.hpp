// pfl: versioned JSON documents and reports.
//
// Format: UTF-8 JSON with format_version "1".  Rationals are strings "p/q",
// polynomials arrays of [coefficient, exponent-vector] in ascending graded
// lexicographic order.  All emitters are deterministic: identical inputs
// give byte-identical bytes.

#pragma once

#include <pfl/contact.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace pfl::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";

Json chart_to_json(const Chart& chart);
Chart chart_from_json(const Json& j);

Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, std::size_t dim);

Json rational_point_to_json(const RationalPoint& p);
RationalPoint rational_point_from_json(const Json& j);

// Envelopes.
Json distribution_document(const Distribution& d);
Json pfaffian_document(const PfaffianSystem& s);
Json diffeo_document(const DiffeoPair& pair);
Json word_document(const ProlongationWord& w);

struct Document {
  std::string kind;
  std::optional<Distribution> distribution;
  std::optional<PfaffianSystem> pfaffian;
  std::optional<DiffeoPair> diffeo;
  std::optional<ProlongationWord> word;
};
Document parse_document(const Json& j);
Document parse_document_text(const std::string& text);

Json word_to_json(const ProlongationWord& w);
ProlongationWord word_from_json(const Json& j);

Json flag_report_to_json(const FlagReport& report);
Json verdict_to_json(const ClassificationVerdict& v, bool include_witnesses);
Json corank_verdict_to_json(const CorankOneVerdict& v, bool include_witnesses);
Json reduction_to_json(const KrReduction& r);

// Canonical bytes: two-space indentation plus one trailing newline.
std::string dump(const Json& j);

// "R(0,1/2);S(3,0)"  — letters separated by ';', parameters by ','.
std::vector<ProlongationLetter> parse_word_text(const std::string& text, int m);
// "a1,a2,...,aN" with rational entries.
RationalPoint parse_point_text(const std::string& text, std::size_t dim);

}  // namespace pfl::io
