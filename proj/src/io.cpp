#include <pfl/io.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace pfl::io {

namespace {

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw input_error("document: rationals must be strings \"p/q\"");
  return parse_rational(j.get<std::string>());
}

void check_envelope(const Json& j, const char* expected_kind = nullptr) {
  if (!j.is_object()) throw input_error("document: not a JSON object");
  if (!j.contains("format_version") || j["format_version"] != kFormatVersion)
    throw input_error("document: unrecognized format_version");
  if (!j.contains("payload_kind") || !j["payload_kind"].is_string())
    throw input_error("document: missing payload_kind");
  if (expected_kind && j["payload_kind"] != expected_kind)
    throw input_error(std::string("document: expected payload_kind ") + expected_kind);
  if (!j.contains("payload")) throw input_error("document: missing payload");
}

std::vector<Polynomial> polynomial_vector_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw input_error("document: expected an array of polynomials");
  std::vector<Polynomial> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(polynomial_from_json(p, dim));
  return out;
}

Json polynomial_vector_to_json(const std::vector<Polynomial>& v) {
  Json out = Json::array();
  for (const auto& p : v) out.push_back(polynomial_to_json(p));
  return out;
}

Json envelope(const char* kind, const Chart& chart, Json payload) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["payload_kind"] = kind;
  j["chart"] = chart_to_json(chart);
  j["payload"] = std::move(payload);
  return j;
}

Json ratfun_to_json(const RationalFunction& f) {
  Json j;
  j["num"] = polynomial_to_json(f.num());
  j["den"] = polynomial_to_json(f.den());
  return j;
}

}  // namespace

Json chart_to_json(const Chart& chart) {
  Json j;
  j["dim"] = chart.dim;
  j["variables"] = chart.names;
  if (chart.jet) {
    Json spec;
    spec["n"] = chart.jet->n;
    spec["m"] = chart.jet->m;
    j["jet"] = spec;
  }
  return j;
}

Chart chart_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim")) throw input_error("document: malformed chart");
  Chart chart;
  chart.dim = j["dim"].get<std::size_t>();
  if (j.contains("variables")) {
    chart.names = j["variables"].get<std::vector<std::string>>();
    if (chart.names.size() != chart.dim)
      throw input_error("document: chart variable count differs from dim");
  } else {
    chart = plain_chart(chart.dim);
  }
  if (j.contains("jet")) {
    JetSpec spec{j["jet"]["n"].get<int>(), j["jet"]["m"].get<int>()};
    if (spec.chart_dim() != chart.dim)
      throw input_error("document: jet spec inconsistent with chart dimension");
    chart.jet = spec;
  }
  return chart;
}

Json polynomial_to_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& [mono, c] : p.terms()) {
    Json term = Json::array();
    term.push_back(to_string(c));
    term.push_back(mono.exponents);
    out.push_back(std::move(term));
  }
  return out;
}

Polynomial polynomial_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw input_error("document: polynomial must be an array of terms");
  Polynomial p(dim);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2)
      throw input_error("document: polynomial term must be [coefficient, exponents]");
    Rational c = rational_from_json(term[0]);
    auto exps = term[1].get<std::vector<uint32_t>>();
    if (exps.size() != dim) throw input_error("document: exponent vector length differs from dim");
    p.add_term(Monomial(std::move(exps)), c);
  }
  return p;
}

Json rational_point_to_json(const RationalPoint& p) {
  Json out = Json::array();
  for (const auto& r : p) out.push_back(to_string(r));
  return out;
}

RationalPoint rational_point_from_json(const Json& j) {
  if (!j.is_array()) throw input_error("document: point must be an array");
  RationalPoint out;
  out.reserve(j.size());
  for (const auto& r : j) out.push_back(rational_from_json(r));
  return out;
}

Json distribution_document(const Distribution& d) {
  Json payload;
  Json gens = Json::array();
  for (const auto& g : d.generators()) gens.push_back(polynomial_vector_to_json(g.components));
  payload["generators"] = std::move(gens);
  return envelope("distribution", d.chart(), std::move(payload));
}

Json pfaffian_document(const PfaffianSystem& s) {
  Json payload;
  Json gens = Json::array();
  for (const auto& g : s.generators()) gens.push_back(polynomial_vector_to_json(g.components));
  payload["generators"] = std::move(gens);
  return envelope("pfaffian", s.chart(), std::move(payload));
}

Json diffeo_document(const DiffeoPair& pair) {
  Json payload;
  payload["forward"] = polynomial_vector_to_json(pair.forward());
  payload["backward"] = polynomial_vector_to_json(pair.backward());
  payload["base_point"] = rational_point_to_json(pair.base_point());
  return envelope("diffeo_pair", pair.chart(), std::move(payload));
}

Json word_to_json(const ProlongationWord& w) {
  Json j;
  j["n"] = w.spec.n;
  j["m"] = w.spec.m;
  Json letters = Json::array();
  for (const auto& letter : w.letters) {
    Json l;
    l["kind"] = letter.kind == ProlongationLetter::Kind::R ? "R" : "S";
    Json c = Json::array();
    for (const auto& r : letter.c) c.push_back(to_string(r));
    l["c"] = std::move(c);
    letters.push_back(std::move(l));
  }
  j["letters"] = std::move(letters);
  return j;
}

ProlongationWord word_from_json(const Json& j) {
  ProlongationWord w;
  w.spec.n = j.at("n").get<int>();
  w.spec.m = j.at("m").get<int>();
  for (const auto& l : j.at("letters")) {
    ProlongationLetter letter;
    std::string kind = l.at("kind").get<std::string>();
    if (kind == "R")
      letter.kind = ProlongationLetter::Kind::R;
    else if (kind == "S")
      letter.kind = ProlongationLetter::Kind::S;
    else
      throw input_error("document: letter kind must be R or S");
    for (const auto& c : l.at("c")) letter.c.push_back(rational_from_json(c));
    w.letters.push_back(std::move(letter));
  }
  validate_word(w);
  return w;
}

Json word_document(const ProlongationWord& w) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["payload_kind"] = "word";
  j["payload"] = word_to_json(w);
  return j;
}

Document parse_document(const Json& j) {
  check_envelope(j);
  Document doc;
  doc.kind = j["payload_kind"].get<std::string>();
  const Json& payload = j["payload"];
  if (doc.kind == "distribution" || doc.kind == "pfaffian" || doc.kind == "diffeo_pair") {
    if (!j.contains("chart")) throw input_error("document: missing chart");
    Chart chart = chart_from_json(j["chart"]);
    if (doc.kind == "distribution") {
      std::vector<VectorField> gens;
      for (const auto& g : payload.at("generators"))
        gens.emplace_back(chart, polynomial_vector_from_json(g, chart.dim));
      doc.distribution = Distribution(chart, std::move(gens));
    } else if (doc.kind == "pfaffian") {
      std::vector<OneForm> gens;
      for (const auto& g : payload.at("generators"))
        gens.emplace_back(chart, polynomial_vector_from_json(g, chart.dim));
      doc.pfaffian = PfaffianSystem(chart, std::move(gens));
    } else {
      doc.diffeo = DiffeoPair(chart, polynomial_vector_from_json(payload.at("forward"), chart.dim),
                              polynomial_vector_from_json(payload.at("backward"), chart.dim),
                              rational_point_from_json(payload.at("base_point")));
    }
  } else if (doc.kind == "word") {
    doc.word = word_from_json(payload);
  } else {
    throw input_error("document: unknown payload_kind '" + doc.kind + "'");
  }
  return doc;
}

Document parse_document_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("document: JSON parse error: ") + e.what());
  }
  return parse_document(j);
}

Json flag_report_to_json(const FlagReport& report) {
  Json j;
  j["kind"] = report.kind == FlagReport::Kind::derived ? "derived" : "lie";
  j["base_point"] = rational_point_to_json(report.base_point);
  j["stabilized"] = report.stabilized;
  Json levels = Json::array();
  for (const auto& level : report.levels)
    levels.push_back(Json::array({level.generator_count, level.generic_rank, level.rank_at_base}));
  j["levels"] = std::move(levels);
  return j;
}

namespace {

const char* status_name(ClassificationVerdict::Status s) {
  switch (s) {
    case ClassificationVerdict::Status::canonical_equivalent:
      return "canonical_equivalent";
    case ClassificationVerdict::Status::extended_kr:
      return "extended_kr";
    default:
      return "rejected";
  }
}

Json levels_json(const std::vector<FlagLevel>& levels) {
  Json out = Json::array();
  for (const auto& level : levels)
    out.push_back(Json::array({level.generator_count, level.generic_rank, level.rank_at_base}));
  return out;
}

Json size_statistics(const ClassificationVerdict& v) {
  Json j;
  std::size_t witness_terms = 0, witness_generators = 0;
  for (const auto& w : v.witnesses) {
    if (!w) continue;
    witness_generators += w->generators().size();
    for (const auto& g : w->generators())
      for (const auto& p : g.components) witness_terms += p.terms().size();
  }
  j["witness_generators"] = witness_generators;
  j["witness_polynomial_terms"] = witness_terms;
  return j;
}

}  // namespace

Json verdict_to_json(const ClassificationVerdict& v, bool include_witnesses) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["payload_kind"] = "verdict";
  Json payload;
  payload["status"] = status_name(v.status);
  payload["n"] = v.n;
  payload["m"] = v.m;
  payload["derived_levels"] = levels_json(v.derived_levels);
  payload["lie_levels"] = levels_json(v.lie_levels);
  Json witness_flags = Json::array();
  for (bool b : v.corank_witness) witness_flags.push_back(b);
  payload["corank_one_witness_per_level"] = std::move(witness_flags);
  if (!v.cartan_ranks.empty()) payload["cartan_ranks"] = v.cartan_ranks;
  if (!v.engel_per_level.empty()) {
    Json engel = Json::array();
    for (bool b : v.engel_per_level) engel.push_back(b);
    payload["engel_per_level"] = std::move(engel);
  }
  if (v.failure) {
    Json f;
    f["level"] = v.failure->level;
    f["condition"] = v.failure->condition;
    f["detail"] = v.failure->detail;
    payload["failure"] = std::move(f);
  } else {
    payload["failure"] = nullptr;
  }
  payload["word"] = v.word ? word_to_json(*v.word) : Json(nullptr);
  if (include_witnesses) {
    Json ws = Json::array();
    for (const auto& w : v.witnesses) {
      if (!w) {
        ws.push_back(nullptr);
        continue;
      }
      Json gens = Json::array();
      for (const auto& g : w->generators()) gens.push_back(polynomial_vector_to_json(g.components));
      ws.push_back(std::move(gens));
    }
    payload["witnesses"] = std::move(ws);
  }
  payload["sizes"] = size_statistics(v);
  j["payload"] = std::move(payload);
  return j;
}

Json corank_verdict_to_json(const CorankOneVerdict& v, bool include_witnesses) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["payload_kind"] = "corank_one_verdict";
  Json payload;
  payload["exists"] = v.exists;
  payload["r0"] = v.r0;
  payload["char_rank_ok"] = v.char_rank_ok;
  payload["engel_rank_one"] = v.engel_rank_one;
  payload["B_involutive"] = v.B_involutive ? Json(*v.B_involutive) : Json(nullptr);
  if (include_witnesses) {
    auto dist_json = [](const std::optional<Distribution>& d) -> Json {
      if (!d) return nullptr;
      Json gens = Json::array();
      for (const auto& g : d->generators()) gens.push_back(polynomial_vector_to_json(g.components));
      return gens;
    };
    payload["B"] = dist_json(v.B);
    payload["L_witness"] = dist_json(v.L_witness);
  }
  j["payload"] = std::move(payload);
  return j;
}

Json reduction_to_json(const KrReduction& r) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["payload_kind"] = "reduction";
  Json payload;
  payload["word"] = word_to_json(r.word);
  Json levels = Json::array();
  for (const auto& level : r.levels) {
    Json l;
    l["level"] = level.level;
    l["branch"] = level.singular ? "singular" : "regular";
    Json c = Json::array();
    for (const auto& value : level.constants) c.push_back(to_string(value));
    l["constants"] = std::move(c);
    l["column_permutation"] =
        level.column_permutation.empty() ? Json(nullptr) : Json(level.column_permutation);
    Json mu = Json::array();
    for (const auto& row : level.mu.entries) {
      Json row_json = Json::array();
      for (const auto& entry : row) row_json.push_back(ratfun_to_json(entry));
      mu.push_back(std::move(row_json));
    }
    l["mu"] = std::move(mu);
    levels.push_back(std::move(l));
  }
  payload["levels"] = std::move(levels);
  Json phi = Json::array();
  for (const auto& comp : r.phi.components) phi.push_back(ratfun_to_json(comp));
  payload["phi"] = std::move(phi);
  j["payload"] = std::move(payload);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<ProlongationLetter> parse_word_text(const std::string& text, int m) {
  std::vector<ProlongationLetter> letters;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    char kind = text[i];
    if (kind != 'R' && kind != 'S')
      throw input_error("word: expected letter R or S at position " + std::to_string(i));
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != '(') throw input_error("word: expected '(' after letter kind");
    std::size_t close = text.find(')', i);
    if (close == std::string::npos) throw input_error("word: missing ')'");
    std::string params = text.substr(i + 1, close - i - 1);
    i = close + 1;
    ProlongationLetter letter;
    letter.kind = kind == 'R' ? ProlongationLetter::Kind::R : ProlongationLetter::Kind::S;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) letter.c.push_back(parse_rational(item));
    if (static_cast<int>(letter.c.size()) != m)
      throw input_error("word: letter must carry exactly m = " + std::to_string(m) +
                        " parameters");
    if (letter.kind == ProlongationLetter::Kind::S && letter.c.back() != 0)
      throw input_error("word: singular letter requires c_m = 0");
    letters.push_back(std::move(letter));
    skip_ws();
    if (i < text.size()) {
      if (text[i] != ';') throw input_error("word: letters must be separated by ';'");
      ++i;
      skip_ws();
    }
  }
  return letters;
}

RationalPoint parse_point_text(const std::string& text, std::size_t dim) {
  RationalPoint out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.size() != dim)
    throw input_error("point: expected " + std::to_string(dim) + " coordinates, got " +
                      std::to_string(out.size()));
  return out;
}

}  // namespace pfl::io
