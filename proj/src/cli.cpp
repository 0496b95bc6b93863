#include "maskforge/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "maskforge/decompose.hpp"
#include "maskforge/error.hpp"
#include "maskforge/io.hpp"
#include "maskforge/subdivision.hpp"
#include "maskforge/zerocond.hpp"

namespace maskforge::cli {

namespace {

using io::json;

struct Options {
  std::string mask_path;
  int cap = 4;
  int order = 1;
  unsigned lmax = 8;
  unsigned rounds = 4;
  std::string out_path;
  std::string format = "text";
  std::string verify_path;
  std::string digits_path;
  std::string data_path;
};

/// A report: human lines plus a machine block.
struct Report {
  std::vector<std::string> human;
  json machine = json::object();

  void line(const std::string& s) { human.push_back(s); }
};

void emit(const Report& r, const Options& opt, std::ostream& out) {
  if (opt.format == "json") {
    out << json{{"machine", r.machine}, {"human", r.human}}.dump(2) << "\n";
    return;
  }
  for (const auto& l : r.human) out << l << "\n";
  out << "--- machine ---\n" << r.machine.dump() << "\n";
}

std::string join_vec(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

io::MaskFile load(const Options& opt) {
  io::MaskFile f = io::load_mask_file(opt.mask_path);
  if (!opt.digits_path.empty()) {
    const json j = io::read_json_file(opt.digits_path);
    auto list = [&](const json& arr) {
      std::vector<IntVec> out;
      for (const auto& v : arr) {
        IntVec x = v.get<IntVec>();
        if (x.size() != f.dim) throw MaskError(ErrorKind::Parse, "digit has wrong dimension");
        out.push_back(std::move(x));
      }
      return out;
    };
    if (j.is_array()) {
      f.digits = list(j);
    } else {
      if (j.contains("digits")) f.digits = list(j.at("digits"));
      if (j.contains("dual_digits")) f.dual_digits = list(j.at("dual_digits"));
    }
  }
  return f;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream o(path);
  if (!o) throw MaskError(ErrorKind::Parse, "cannot write " + path);
  o << content;
}

int cmd_analyze(const Options& opt, std::ostream& out) {
  io::MaskFile f = load(opt);
  const DilationContext ctx = f.context();
  const TrigPoly& t = f.mask;
  Report r;
  const Cyclotomic t0 = t.eval(RatVec(ctx.dim(), 0));
  const auto taus = polyphase_split(t, ctx);
  json tau0 = json::array();
  for (const auto& tau : taus) tau0.push_back(io::to_json(tau.eval(RatVec(ctx.dim(), 0))));
  const int order = zero_condition_order(t, ctx, opt.cap);

  r.machine["m"] = ctx.m();
  r.machine["digits"] = ctx.digits();
  r.machine["dual_digits"] = ctx.dual_digits();
  r.machine["t0"] = io::to_json(t0);
  r.machine["t0_equals_m"] = t0 == Cyclotomic(static_cast<long long>(ctx.m()));
  r.machine["polyphase_at_0"] = tau0;
  r.machine["order"] = order;
  r.machine["cap"] = opt.cap;
  if (order >= 0) r.machine["lambda"] = io::to_json(lambda_parameters(t, ctx, order));

  r.line("m = " + std::to_string(ctx.m()));
  std::string d = "digits:";
  for (const auto& s : ctx.digits()) d += " " + join_vec(s);
  r.line(d);
  d = "dual digits:";
  for (const auto& s : ctx.dual_digits()) d += " " + join_vec(s);
  r.line(d);
  r.line("t(0) = " + t0.to_string() + (r.machine["t0_equals_m"].get<bool>() ? " = m" : " != m"));
  for (std::size_t nu = 0; nu < taus.size(); ++nu) {
    r.line("tau_" + std::to_string(nu) + "(0) = " + taus[nu].eval(RatVec(ctx.dim(), 0)).to_string());
  }
  if (order < 0) {
    r.line("order -1 (not in Z^0)");
  } else if (order == opt.cap) {
    r.line("order >= " + std::to_string(order) + " (cap reached)");
  } else {
    r.line("order " + std::to_string(order) + " (in Z^" + std::to_string(order) + ", not in Z^" +
           std::to_string(order + 1) + ")");
  }
  emit(r, opt, out);
  return kOk;
}

int verify_only(const Options& opt, const io::MaskFile& f, const DilationContext& ctx, std::ostream& out) {
  const json j = io::read_json_file(opt.verify_path);
  IteratedDecomposition it;
  try {
    it = io::iterated_from_json(j, ctx.dim());
  } catch (const json::exception& e) {
    throw MaskError(ErrorKind::Parse, opt.verify_path + ": " + e.what());
  }
  Report r;
  const bool identity = iterated_identity_holds(f.mask, it, ctx);
  const bool values = iterated_values_hold(f.mask, it, ctx);
  bool cls = true;
  for (const auto& row : it.entries)
    for (const auto& e : row) cls = cls && in_class_by_definition(e, ctx, it.class_guarantee);
  r.machine = {{"order", it.order}, {"identity_exact", identity}, {"values_exact", values},
               {"achieved_class", it.class_guarantee}, {"class_verified", cls}};
  r.line(std::string("identity exact: ") + (identity ? "yes" : "no"));
  r.line(std::string("T(0) = t(0) (M*^-1)^[n]: ") + (values ? "yes" : "no"));
  r.line("achieved class " + std::to_string(it.class_guarantee) + (cls ? " verified" : " NOT verified"));
  emit(r, opt, out);
  return identity && values && cls ? kOk : kVerifyFailed;
}

int cmd_decompose(const Options& opt, std::ostream& out) {
  io::MaskFile f = load(opt);
  const DilationContext ctx = f.context();
  if (!opt.verify_path.empty()) return verify_only(opt, f, ctx, out);
  if (opt.order < 1) throw MaskError(ErrorKind::Parse, "--order must be >= 1");
  const int detected = zero_condition_order(f.mask, ctx, std::max(opt.cap, opt.order - 1));
  if (detected < opt.order - 1) {
    throw MaskError(ErrorKind::NotInClass, "depth " + std::to_string(opt.order) + " needs a mask in Z^" +
                                               std::to_string(opt.order - 1) + "; detected order " +
                                               std::to_string(detected));
  }
  const IteratedDecomposition it = iterated_decomposition(f.mask, ctx, opt.order, detected + 1);
  json doc = io::to_json(it);
  if (it.order == 1) {
    json poly = json::array();
    for (std::size_t j = 0; j < ctx.dim(); ++j)
      for (std::size_t k = 0; k < ctx.dim(); ++k) {
        const auto taus = polyphase_split(it.entries[j][k], ctx);
        for (std::size_t nu = 0; nu < taus.size(); ++nu)
          poly.push_back({{"j", j + 1}, {"k", k + 1}, {"nu", nu}, {"mask", io::to_json(taus[nu])}});
      }
    doc["polyphase"] = poly;
  }
  if (!opt.out_path.empty()) write_file(opt.out_path, doc.dump(2) + "\n");

  Report r;
  const bool identity = iterated_identity_holds(f.mask, it, ctx);
  const bool values = iterated_values_hold(f.mask, it, ctx);
  r.machine = {{"order", it.order}, {"detected_class", detected}, {"achieved_class", it.class_guarantee},
               {"identity_exact", identity}, {"values_exact", values}, {"entries", it.entries.size() * it.entries.size()}};
  if (opt.out_path.empty()) r.machine["decomposition"] = doc;
  r.line("depth " + std::to_string(it.order) + ", mask class " + std::to_string(detected));
  r.line(std::string("identity exact: ") + (identity ? "yes" : "no"));
  r.line(std::string("T(0) = t(0) (M*^-1)^[n]: ") + (values ? "yes" : "no"));
  r.line("achieved class: " + std::to_string(it.class_guarantee));
  if (it.order == 1) {
    for (const auto& p : doc["polyphase"]) {
      const TrigPoly tau = io::trigpoly_from_json(p["mask"], ctx.dim());
      r.line("tau_" + std::to_string(p["j"].get<int>()) + std::to_string(p["k"].get<int>()) +
             std::to_string(p["nu"].get<int>()) + " = " + tau.to_string());
    }
  }
  if (!opt.out_path.empty()) r.line("written to " + opt.out_path);
  emit(r, opt, out);
  return kOk;
}

std::string norm_line(const NormStep& s) {
  const std::string v = s.value.is_exact() ? to_string(s.value.hi) : "<= " + to_string(s.value.hi);
  return "  L=" + std::to_string(s.L) + ": " + v + (s.below_one ? " < 1" : "");
}

int cmd_converge(const Options& opt, std::ostream& out) {
  io::MaskFile f = load(opt);
  const DilationContext ctx = f.context();
  const ConvergenceReport c = check_convergence(f.mask, ctx, opt.lmax);
  Report r;
  r.machine = io::to_json(c);
  if (c.verdict == Verdict::Convergent) {
    const auto& step = c.trajectory[*c.certificate - 1];
    r.line("convergent, certificate L=" + std::to_string(*c.certificate) + ", ||S_T^L|| <= " + to_string(step.value.hi));
  } else {
    std::string why;
    for (const auto& s : c.reasons) why += (why.empty() ? "" : "; ") + s;
    r.line("inconclusive: " + why);
  }
  if (!c.trajectory.empty()) r.line("norm trajectory ||S_T^L||:");
  for (const auto& s : c.trajectory) r.line(norm_line(s));
  emit(r, opt, out);
  return kOk;
}

int cmd_smooth(const Options& opt, std::ostream& out) {
  io::MaskFile f = load(opt);
  const DilationContext ctx = f.context();
  const SmoothnessReport c = check_c1(f.mask, ctx, opt.lmax);
  Report r;
  r.machine = io::to_json(c);
  if (c.verdict == Verdict::C1) {
    const auto& step = c.trajectory[*c.certificate - 1];
    r.line("C1, certificate L=" + std::to_string(*c.certificate) + ", ||M*^L|| ||S_Q^L|| <= " + to_string(step.value.hi));
  } else {
    std::string why;
    for (const auto& s : c.reasons) why += (why.empty() ? "" : "; ") + s;
    r.line("inconclusive: " + why);
  }
  r.line(std::string("isotropic: ") + to_string(c.isotropy.verdict));
  r.line(std::string("convergence: ") + to_string(c.convergence.verdict));
  if (!c.trajectory.empty()) r.line("trajectory ||M*^L|| ||S_Q^L||:");
  for (const auto& s : c.trajectory) r.line(norm_line(s));
  emit(r, opt, out);
  return kOk;
}

int cmd_refine(const Options& opt, std::ostream& out) {
  io::MaskFile f = load(opt);
  const DilationContext ctx = f.context();
  if (!f.mask.has_rational_coefficients()) throw MaskError(ErrorKind::ShapeMismatch, "refine needs a rational mask");
  Sequence data = Sequence::delta(ctx.dim(), 1, IntVec(ctx.dim(), 0));
  if (!opt.data_path.empty()) {
    std::ifstream in(opt.data_path);
    if (!in) throw MaskError(ErrorKind::Parse, "cannot open " + opt.data_path);
    data = io::read_sequence_csv(in, ctx.dim());
  }
  if (data.width != 1) throw MaskError(ErrorKind::ShapeMismatch, "scalar mask needs a width-1 sequence");
  const auto samples = refine(f.mask, ctx, data, opt.rounds);
  std::ostringstream csv;
  io::write_refined_csv(csv, samples, ctx.dim());
  if (opt.out_path.empty()) {
    out << csv.str();
    return kOk;
  }
  write_file(opt.out_path, csv.str());
  Report r;
  r.machine = {{"rounds", opt.rounds}, {"points", samples.size()}, {"out", opt.out_path}};
  r.line(std::to_string(samples.size()) + " points after " + std::to_string(opt.rounds) + " rounds written to " + opt.out_path);
  emit(r, opt, out);
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::NotDilation:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonIntegerFrequencies:
    case ErrorKind::WrongCount:
    case ErrorKind::DivisionByZero:
      return kParse;
    case ErrorKind::UserDigitsInvalid:
      return kDigits;
    case ErrorKind::NotInZ0:
    case ErrorKind::NotInClass:
      return kClass;
    case ErrorKind::ShapeMismatch:
    case ErrorKind::NotDivisible:
      return kShape;
    case ErrorKind::MethodDisagreement:
    case ErrorKind::InternalIdentityViolation:
      return kInternal;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis of multivariate subdivision masks", "maskforge"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("mask", opt.mask_path, "mask file (JSON)")->required();
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--digits", opt.digits_path, "JSON file with digits / dual_digits overriding the mask file");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "digit sets, values at 0, zero-condition order, lambda table");
  add_common(analyze);
  analyze->add_option("--cap", opt.cap, "largest order to test")->check(CLI::NonNegativeNumber);

  CLI::App* decompose = app.add_subcommand("decompose", "iterated decomposition of depth --order");
  add_common(decompose);
  decompose->add_option("--order", opt.order, "decomposition depth n");
  decompose->add_option("--cap", opt.cap, "largest class to detect")->check(CLI::NonNegativeNumber);
  decompose->add_option("--out", opt.out_path, "write decomposition JSON here");
  decompose->add_option("--verify-only", opt.verify_path, "re-verify a decomposition JSON against the mask");

  CLI::App* converge = app.add_subcommand("converge", "sufficient convergence test");
  add_common(converge);
  converge->add_option("--lmax", opt.lmax, "largest power tried");

  CLI::App* smooth = app.add_subcommand("smooth", "sufficient C1 test");
  add_common(smooth);
  smooth->add_option("--lmax", opt.lmax, "largest power tried");

  CLI::App* refine_cmd = app.add_subcommand("refine", "apply the scheme to data");
  add_common(refine_cmd);
  refine_cmd->add_option("--data", opt.data_path, "CSV sequence (default: delta at 0)");
  refine_cmd->add_option("--rounds", opt.rounds, "number of subdivision rounds");
  refine_cmd->add_option("--out", opt.out_path, "write CSV here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opt, out);
    if (decompose->parsed()) return cmd_decompose(opt, out);
    if (converge->parsed()) return cmd_converge(opt, out);
    if (smooth->parsed()) return cmd_smooth(opt, out);
    if (refine_cmd->parsed()) return cmd_refine(opt, out);
  } catch (const MaskError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const io::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
  return kInternal;
}

}  // namespace maskforge::cli
