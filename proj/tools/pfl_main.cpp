// pfl: command-line driver.
//
// Subcommands: generate, classify, pushforward, reduce, flags, bryant.
// Reports go to standard output (and optionally --out); diagnostics and
// timing go to standard error.  Exit codes for classify: 0 canonical
// equivalent, 10 extended Kumpera-Ruiz, 20 rejected, 2 input error.

#include <pfl/io.hpp>
#include <pfl/parallel.hpp>

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using pfl::io::Json;

constexpr int kExitCanonical = 0;
constexpr int kExitExtendedKr = 10;
constexpr int kExitRejected = 20;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pfl::input_error("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Json& report, const std::string& out_path) {
  std::string bytes = pfl::io::dump(report);
  std::cout << bytes;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw pfl::input_error("cannot open output file '" + out_path + "'");
    out << bytes;
  }
}

pfl::RationalPoint base_point(const std::string& at, std::size_t dim) {
  if (at.empty()) return pfl::RationalPoint(dim, pfl::Rational(0));
  return pfl::io::parse_point_text(at, dim);
}

int status_exit_code(const pfl::ClassificationVerdict& v) {
  switch (v.status) {
    case pfl::ClassificationVerdict::Status::canonical_equivalent:
      return kExitCanonical;
    case pfl::ClassificationVerdict::Status::extended_kr:
      return kExitExtendedKr;
    default:
      return kExitRejected;
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfl: exact classification of contact systems for curves"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global options after the subcommand name

  std::string format = "json";
  app.add_option("--format", format, "output format (json)")->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "emit an extended Kumpera-Ruiz normal form");
  std::string gen_spec, gen_word, gen_out;
  generate->add_option("--spec", gen_spec, "jet spec n,m")->required();
  generate->add_option("--word", gen_word, "letters, e.g. \"R(0,0);S(1/2,0)\" (default all R(0))");
  generate->add_option("--out", gen_out, "also write the document to this path");

  // classify
  auto* classify = app.add_subcommand("classify", "classify a distribution or Pfaffian system");
  std::string cls_in, cls_at, cls_out;
  bool cls_contact = false, cls_pfaffian = false, cls_bryant = false, cls_witnesses = false;
  classify->add_option("input", cls_in, "input document")->required();
  classify->add_option("--at", cls_at, "base point a1,...,aN (default origin)");
  classify->add_flag("--contact", cls_contact, "force the distribution route");
  classify->add_flag("--pfaffian", cls_pfaffian, "force the Pfaffian route");
  classify->add_flag("--bryant", cls_bryant, "run the corank-one decision instead");
  classify->add_flag("--witnesses", cls_witnesses, "include witness polynomials");
  classify->add_option("--out", cls_out, "also write the report to this path");

  // pushforward
  auto* push = app.add_subcommand("pushforward", "transform a distribution by a verified diffeo pair");
  std::string push_in, push_diffeo, push_out;
  push->add_option("input", push_in, "distribution document")->required();
  push->add_option("--diffeo", push_diffeo, "diffeo pair document")->required();
  push->add_option("--out", push_out, "also write the document to this path");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "recover the prolongation word of a Weber-form family");
  std::string red_in, red_at, red_out;
  reduce->add_option("input", red_in, "distribution document")->required();
  reduce->add_option("--at", red_at, "base point (must be the origin)");
  reduce->add_option("--out", red_out, "also write the report to this path");

  // flags
  auto* flags_cmd = app.add_subcommand("flags", "derived and Lie flag report");
  std::string flg_in, flg_at, flg_out;
  flags_cmd->add_option("input", flg_in, "distribution or pfaffian document")->required();
  flags_cmd->add_option("--at", flg_at, "base point (default origin)");
  flags_cmd->add_option("--out", flg_out, "also write the report to this path");

  // bryant
  auto* bryant_cmd = app.add_subcommand("bryant", "corank-one involutive subdistribution decision");
  std::string br_in, br_at, br_out;
  bool br_witnesses = false;
  bryant_cmd->add_option("input", br_in, "distribution document")->required();
  bryant_cmd->add_option("--at", br_at, "base point (default origin)");
  bryant_cmd->add_flag("--witnesses", br_witnesses, "include witness polynomials");
  bryant_cmd->add_option("--out", br_out, "also write the report to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    pfl::thread_budget();  // validate PFL_THREADS up front
    if (format != "json") throw pfl::input_error("unsupported --format '" + format + "'");
    Timer timer;

    if (*generate) {
      int n = 0, m = 0;
      if (std::sscanf(gen_spec.c_str(), "%d,%d", &n, &m) != 2 || n < 1 || m < 1)
        throw pfl::input_error("--spec must be n,m with n,m >= 1");
      pfl::ProlongationWord word;
      word.spec = pfl::JetSpec{n, m};
      if (gen_word.empty()) {
        word.letters.assign(n - 1, pfl::ProlongationLetter::regular(
                                       std::vector<pfl::Rational>(m, pfl::Rational(0))));
      } else {
        word.letters = pfl::io::parse_word_text(gen_word, m);
      }
      pfl::validate_word(word);
      emit(pfl::io::distribution_document(pfl::generate_kumpera_ruiz(word)), gen_out);
      std::cerr << "generate: " << timer.ms() << " ms\n";
      return 0;
    }

    if (*classify) {
      pfl::io::Document doc = pfl::io::parse_document_text(read_file(cls_in));
      if (cls_contact + cls_pfaffian + cls_bryant > 1)
        throw pfl::input_error("--contact, --pfaffian and --bryant are mutually exclusive");
      int code = kExitRejected;
      Json report;
      if (cls_bryant) {
        if (!doc.distribution) throw pfl::input_error("--bryant needs a distribution document");
        auto base = base_point(cls_at, doc.distribution->chart().dim);
        pfl::CorankOneVerdict v = pfl::decide_corank_one_involutive(*doc.distribution, base);
        report = pfl::io::corank_verdict_to_json(v, cls_witnesses);
        code = v.exists ? kExitCanonical : kExitRejected;
      } else if (cls_pfaffian || (doc.pfaffian && !cls_contact)) {
        if (!doc.pfaffian) throw pfl::input_error("--pfaffian needs a pfaffian document");
        auto base = base_point(cls_at, doc.pfaffian->chart().dim);
        pfl::ClassificationVerdict v = pfl::classify_pfaffian(*doc.pfaffian, base);
        report = pfl::io::verdict_to_json(v, cls_witnesses);
        code = status_exit_code(v);
      } else {
        if (!doc.distribution)
          throw pfl::input_error(cls_contact ? "--contact needs a distribution document"
                                             : "classify needs a distribution or pfaffian document");
        auto base = base_point(cls_at, doc.distribution->chart().dim);
        pfl::ClassificationVerdict v = pfl::classify_contact(*doc.distribution, base);
        report = pfl::io::verdict_to_json(v, cls_witnesses);
        code = status_exit_code(v);
      }
      emit(report, cls_out);
      std::cerr << "classify: " << timer.ms() << " ms\n";
      return code;
    }

    if (*push) {
      pfl::io::Document doc = pfl::io::parse_document_text(read_file(push_in));
      if (!doc.distribution) throw pfl::input_error("pushforward needs a distribution document");
      pfl::io::Document dd = pfl::io::parse_document_text(read_file(push_diffeo));
      if (!dd.diffeo) throw pfl::input_error("--diffeo needs a diffeo_pair document");
      emit(pfl::io::distribution_document(pfl::pushforward(*doc.distribution, *dd.diffeo)),
           push_out);
      std::cerr << "pushforward: " << timer.ms() << " ms\n";
      return 0;
    }

    if (*reduce) {
      pfl::io::Document doc = pfl::io::parse_document_text(read_file(red_in));
      if (!doc.distribution) throw pfl::input_error("reduce needs a distribution document");
      auto base = base_point(red_at, doc.distribution->chart().dim);
      pfl::KrReduction r = pfl::kr_reduce(doc.distribution->generators(), base);
      emit(pfl::io::reduction_to_json(r), red_out);
      std::cerr << "reduce: " << timer.ms() << " ms\n";
      return 0;
    }

    if (*flags_cmd) {
      pfl::io::Document doc = pfl::io::parse_document_text(read_file(flg_in));
      Json report;
      report["format_version"] = pfl::io::kFormatVersion;
      report["payload_kind"] = "flag_report";
      Json payload;
      if (doc.distribution) {
        auto base = base_point(flg_at, doc.distribution->chart().dim);
        payload["derived"] =
            pfl::io::flag_report_to_json(pfl::derived_flag(*doc.distribution, base).report);
        payload["lie"] = pfl::io::flag_report_to_json(pfl::lie_flag(*doc.distribution, base).report);
        auto reg = pfl::is_regular_point(*doc.distribution, base);
        payload["regular_point"] = reg.is_regular;
        payload["first_defective_level"] =
            reg.first_defective_level ? Json(*reg.first_defective_level) : Json(nullptr);
      } else if (doc.pfaffian) {
        auto base = base_point(flg_at, doc.pfaffian->chart().dim);
        payload["derived"] =
            pfl::io::flag_report_to_json(pfl::derived_flag_forms(*doc.pfaffian, base).report);
      } else {
        throw pfl::input_error("flags needs a distribution or pfaffian document");
      }
      report["payload"] = std::move(payload);
      emit(report, flg_out);
      std::cerr << "flags: " << timer.ms() << " ms\n";
      return 0;
    }

    if (*bryant_cmd) {
      pfl::io::Document doc = pfl::io::parse_document_text(read_file(br_in));
      if (!doc.distribution) throw pfl::input_error("bryant needs a distribution document");
      auto base = base_point(br_at, doc.distribution->chart().dim);
      pfl::CorankOneVerdict v = pfl::decide_corank_one_involutive(*doc.distribution, base);
      emit(pfl::io::corank_verdict_to_json(v, br_witnesses), br_out);
      std::cerr << "bryant: " << timer.ms() << " ms\n";
      return v.exists ? kExitCanonical : kExitRejected;
    }
  } catch (const pfl::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const pfl::precondition_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const pfl::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;  // EX_SOFTWARE
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
