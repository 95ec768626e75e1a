#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "gmean/random.hpp"
#include "gmean/recovery.hpp"
#include "gmean/regularize.hpp"

namespace gmean::cmd {

namespace {

template <class F>
auto dispatch(Mode mode, F&& f) {
  if (mode == Mode::Exact) return f(Rational{});
  return f(0.0);
}

template <Scalar T>
Json encode_norm(const LrNorm<T>& n) {
  Json j = Json::object();
  j["value"] = doc::encode(n.value);
  j["power"] = n.power ? doc::encode(*n.power) : Json(nullptr);
  return j;
}

Json encode_tuples(const std::vector<Tuple>& tuples) {
  Json arr = Json::array();
  for (const Tuple& t : tuples) arr.push_back(doc::encode_tuple(t));
  return arr;
}

template <Scalar T>
Json encode_indices(const MeasurableSet<T>& s) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.contains(i)) arr.push_back(i);
  return arr;
}

void mark_failed(Json& report, bool ok) {
  if (!ok && report["status"] == "ok") report["status"] = "failed";
}

template <Scalar T>
bool agree_on_support(const GridFunction<T>& a, const GridFunction<T>& b) {
  const auto positive = a.space().positive_table(a.order());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (positive[i] && !(a[i] == b[i])) return false;
  return true;
}

Mode inputs_mode(const Json& space, std::initializer_list<const Json*> others) {
  for (const Json* d : others) doc::expect_same_mode(space, *d);
  return doc::mode_of_doc(space);
}

}  // namespace

double parse_exponent(const std::string& text) {
  const double r = to_double(parse_rational(text));
  if (!(r >= 1.0)) fail(ErrorCode::Domain, "exponent r must be >= 1");
  return r;
}

Json apply(const Json& space_doc, const Json& kernel_doc, std::size_t N, bool grouped, unsigned threads) {
  return dispatch(inputs_mode(space_doc, {&kernel_doc}), [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto u = doc::decode_function<T>(kernel_doc, space);
    const ExecPolicy exec{threads};
    return doc::encode_function(grouped ? gmean_apply_grouped(u, N, exec) : gmean_apply(u, N, exec));
  });
}

Outputs recover(const Json& space_doc, const Json& mean_doc, std::size_t m, bool oracle, unsigned threads) {
  const Mode mode = inputs_mode(space_doc, {&mean_doc});
  if (oracle && mode != Mode::Exact) fail(ErrorCode::Validation, "the elimination oracle needs exact mode");
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto U = doc::decode_function<T>(mean_doc, space);
    RecoverOptions opts;
    opts.exec = ExecPolicy{threads};
    const RecoveryResult<T> res = recover_kernel(U, m, opts);

    Json r = doc::report("recover", mode);
    r["N"] = U.order();
    r["m"] = m;
    r["residual_sup"] = doc::encode(res.residual_sup);
    r["in_range"] = res.in_range;
    r["tails"] = encode_tuples(res.tails);
    r["base"] = doc::encode_tuple(res.base);
    r["undetermined_points"] = encode_indices(res.undetermined);
    if constexpr (std::is_same_v<T, Rational>) {
      if (oracle) {
        const OracleResult o = oracle_solve(U, m);
        Json j = Json::object();
        j["in_range"] = o.result.in_range;
        j["consistent"] = o.consistent;
        j["rank"] = o.rank;
        j["support_unknowns"] = o.support_unknowns;
        j["full_column_rank_on_support"] = o.full_column_rank_on_support;
        j["residual_sup"] = doc::encode(o.result.residual_sup);
        const bool agrees = o.result.in_range == res.in_range &&
                            (!res.in_range || agree_on_support(o.result.kernel, res.kernel));
        j["agrees"] = agrees;
        r["oracle"] = std::move(j);
        mark_failed(r, agrees);
      }
    }
    return Outputs{std::move(r), doc::encode_function(res.kernel)};
  });
}

Json compose_check(const Json& space_doc, const Json& kernel_doc, std::size_t m, std::size_t N) {
  const Mode mode = inputs_mode(space_doc, {&kernel_doc});
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto u = doc::decode_function<T>(kernel_doc, space);
    const Lemma2Report<T> rep = check_lemma2(u, m, N);
    Json r = doc::report("compose-check", mode);
    r["k"] = u.order();
    r["m"] = m;
    r["N"] = N;
    r["holds"] = rep.holds;
    r["discrepancy"] = doc::encode(rep.discrepancy);
    mark_failed(r, rep.holds);
    return r;
  });
}

Outputs bhat(const Json& space_doc, const Json& set_doc, std::size_t N, bool require_conull) {
  const Mode mode = inputs_mode(space_doc, {&set_doc});
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto E = doc::decode_set<T>(set_doc, space);
    const Lemma1Report<T> rep = check_lemma1(E, N);
    Json r = doc::report("bhat", mode);
    r["m"] = E.order();
    r["N"] = N;
    r["image_measure"] = doc::encode(measure_of(rep.image));
    r["image_count"] = rep.image.count();
    Json l = Json::object();
    l["input_conull"] = rep.input_conull;
    l["image_conull"] = rep.image_conull;
    l["input_complement_measure"] = doc::encode(rep.input_complement_measure);
    l["image_complement_measure"] = doc::encode(rep.image_complement_measure);
    r["lemma1"] = std::move(l);
    if (require_conull && rep.precondition_violated()) r["status"] = "precondition-violation";
    mark_failed(r, !rep.input_conull || rep.image_conull);
    return Outputs{std::move(r), doc::encode_set(rep.image)};
  });
}

Json marginal(const Json& space_doc, const Json& density_doc, std::size_t m) {
  return dispatch(inputs_mode(space_doc, {&density_doc}), [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto P = doc::decode_density<T>(density_doc, space);
    return doc::encode_function(marginal(P, m));
  });
}

Json norms(const Json& space_doc, const Json& kernel_doc, std::size_t N, const Json* density_doc,
           const std::string& r_text) {
  const Mode mode = density_doc ? inputs_mode(space_doc, {&kernel_doc, density_doc})
                                : inputs_mode(space_doc, {&kernel_doc});
  const double r_value = parse_exponent(r_text);
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto u = doc::decode_function<T>(kernel_doc, space);
    Json r = doc::report("norms", mode);
    r["N"] = N;
    r["m"] = u.order();

    const Theorem2Report<T> t2 = verify_theorem2(u, N);
    Json a = Json::object();
    a["mean_norm"] = doc::encode(t2.mean_norm);
    a["kernel_norm"] = doc::encode(t2.kernel_norm);
    a["constant"] = t2.constant;
    a["lower_holds"] = t2.lower_holds;
    a["upper_holds"] = t2.upper_holds;
    r["linf"] = std::move(a);
    mark_failed(r, t2.holds());

    if (density_doc) {
      const auto P = doc::decode_density<T>(*density_doc, space);
      if (P.order() != N) fail(ErrorCode::Domain, "density order must equal N");
      const Theorem3Report<T> t3 = verify_theorem3(P, u, r_value);
      Json b = Json::object();
      b["r"] = r_text;
      b["mean_norm"] = encode_norm(t3.mean_norm);
      b["kernel_norm"] = encode_norm(t3.kernel_norm);
      b["if_direction_holds"] = t3.if_direction_holds;
      b["condition_holds"] = t3.condition_holds;
      b["alpha"] = t3.alpha ? doc::encode(*t3.alpha) : Json(nullptr);
      b["constant"] = t3.constant ? doc::encode(*t3.constant) : Json(nullptr);
      b["constant_exact"] = t3.constant_exact ? doc::encode(*t3.constant_exact) : Json(nullptr);
      b["only_if_holds"] = t3.only_if_holds ? Json(*t3.only_if_holds) : Json(nullptr);
      b["only_if_exact"] = t3.only_if_exact;
      b["ratio"] = doc::encode(t3.ratio);
      r["lr"] = std::move(b);
      mark_failed(r, t3.if_direction_holds && t3.only_if_holds.value_or(true));
    }
    return r;
  });
}

Json check_domination(const Json& space_doc, const Json& density_doc, bool require_condition) {
  const Mode mode = inputs_mode(space_doc, {&density_doc});
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto P = doc::decode_density<T>(density_doc, space);
    const DominationCertificate<T> cert = extract_gamma(P);
    Json r = doc::report("check-domination", mode);
    r["N"] = P.order();
    r["gamma"] = doc::encode_values<T>(cert.gamma);
    r["A"] = encode_indices(cert.A);
    r["measure_A"] = doc::encode(cert.measure_A);
    r["condition_holds"] = cert.condition_holds;
    if (cert.condition_holds) {
      r["epsilon"] = doc::encode(cert.epsilon);
      r["A_eps"] = encode_indices(cert.A_eps);
      r["measure_A_eps"] = doc::encode(cert.measure_A_eps);
      r["alpha"] = doc::encode(cert.alpha);
      Json cascade = Json::array();
      for (std::size_t m = 1; m < P.order(); ++m) {
        const CascadeReport<T> c = check_cascade(P, cert, m);
        Json j = Json::object();
        j["m"] = m;
        j["holds"] = c.holds;
        j["worst_margin"] = doc::encode(c.worst_margin);
        j["steps_hold"] = c.steps_hold;
        j["worst_step_margin"] = doc::encode(c.worst_step_margin);
        j["checked"] = c.checked;
        cascade.push_back(std::move(j));
        mark_failed(r, c.holds && c.steps_hold);
      }
      r["cascade"] = std::move(cascade);
    } else if (require_condition) {
      r["status"] = "precondition-violation";
    }
    return r;
  });
}

Outputs t_set(const Json& space_doc, const Json& mean_doc, const Json& density_doc, std::size_t m,
              const std::string& r_text) {
  const Mode mode = inputs_mode(space_doc, {&mean_doc, &density_doc});
  const double r_value = parse_exponent(r_text);
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto U = doc::decode_function<T>(mean_doc, space);
    const auto P = doc::decode_density<T>(density_doc, space);
    const DominationCertificate<T> cert = extract_gamma(P);
    const TSetReport<T> t = t_set(U, P, cert, m, r_value);
    Json r = doc::report("t-set", mode);
    r["N"] = P.order();
    r["m"] = m;
    r["r"] = r_text;
    r["epsilon"] = doc::encode(cert.epsilon);
    r["alpha"] = doc::encode(cert.alpha);
    r["A_eps"] = encode_indices(cert.A_eps);
    r["threshold"] = t.threshold ? doc::encode(*t.threshold) : Json(nullptr);
    r["measure"] = doc::encode(t.measure);
    r["count"] = t.set.count();
    r["positive"] = t.positive;
    mark_failed(r, t.positive);
    return Outputs{std::move(r), doc::encode_set(t.set)};
  });
}

Json constants(unsigned N, unsigned m, const std::string& r_text, const std::optional<std::string>& alpha_text) {
  Json r = doc::report("constants", Mode::Exact);
  r["N"] = N;
  r["m"] = m;
  r["linf_constant"] = theorem2_constant(N, m);
  if (alpha_text) {
    if (m >= N) fail(ErrorCode::Domain, "the integrability constant needs m < N");
    const Rational r_exact = parse_rational(r_text);
    const double r_value = parse_exponent(r_text);
    const Rational alpha = parse_rational(*alpha_text);
    if (sgn(alpha) <= 0) fail(ErrorCode::Domain, "alpha must be positive");
    r["r"] = r_text;
    r["alpha"] = doc::encode(alpha);
    r["lr_constant"] = doc::encode(theorem3_constant(N, m, r_value, to_double(alpha)));
    std::optional<Rational> exact;
    if (r_exact.get_den() == 1)
      exact = theorem3_constant_exact(N, m, static_cast<unsigned>(r_exact.get_num().get_ui()), alpha);
    r["lr_constant_exact"] = exact ? doc::encode(*exact) : Json(nullptr);
  }
  return r;
}

Outputs regularize(const Json& space_doc, const Json& density_doc, const std::vector<std::uint64_t>& indices) {
  const Mode mode = inputs_mode(space_doc, {&density_doc});
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    const auto P = doc::decode_density<T>(density_doc, space);
    const RegularizationSweep<T> sweep = regularization_sweep(P, indices);
    Json r = doc::report("regularize", mode);
    Json steps = Json::array();
    for (const auto& s : sweep.steps) {
      Json j = Json::object();
      j["n"] = s.n;
      j["alpha"] = doc::encode(s.alpha);
      j["q_norm"] = doc::encode(s.q_norm);
      j["l1_error"] = doc::encode(s.l1_error);
      j["linf_error"] = doc::encode(s.linf_error);
      j["min_gamma"] = doc::encode(s.min_gamma);
      j["certificate_ok"] = s.certificate_ok;
      j["sandwich_ok"] = s.sandwich_ok;
      steps.push_back(std::move(j));
      mark_failed(r, s.certificate_ok && s.sandwich_ok);
    }
    r["steps"] = std::move(steps);
    r["l1_nonincreasing"] = sweep.l1_nonincreasing;
    r["linf_nonincreasing"] = sweep.linf_nonincreasing;
    return Outputs{std::move(r), doc::encode_density(sweep.steps.back().density)};
  });
}

Json example_4_1(std::uint64_t M, std::uint64_t dense_limit) {
  const Example41Report e = gmean::example_4_1(M, dense_limit);
  Json r = doc::report("example-4-1", Mode::Float);
  r["M"] = e.M;
  r["I1"] = doc::encode(e.I1);
  r["I2"] = doc::encode(e.I2);
  r["normalization"] = doc::encode(e.normalization);
  r["growth"] = doc::encode(e.growth);
  r["ratio"] = doc::encode(e.ratio);
  r["if_direction_holds"] = e.if_direction_holds;
  r["measure_A"] = doc::encode(e.measure_A);
  r["condition_holds"] = e.measure_A > 0;
  r["max_abs_mean_on_support"] = doc::encode(e.max_abs_mean_on_support);
  r["dense_checked"] = e.dense_checked;
  if (e.dense_checked) {
    r["dense_agrees"] = e.dense_agrees;
    r["dense_discrepancy"] = doc::encode(e.dense_discrepancy);
  }
  mark_failed(r, e.if_direction_holds && (!e.dense_checked || e.dense_agrees));
  return r;
}

Json generate_space(Mode mode, std::uint64_t seed, std::size_t n, std::optional<std::size_t> zero_atom) {
  if (n < 1) fail(ErrorCode::Domain, "a space needs at least one point");
  return dispatch(mode, [&](auto tag) {
    using T = decltype(tag);
    RandomSource src(seed);
    return doc::encode_space(*random_space<T>(src, n, zero_atom));
  });
}

Json generate_function(const Json& space_doc, std::uint64_t seed, std::size_t order, bool symmetric) {
  return dispatch(doc::mode_of_doc(space_doc), [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    RandomSource src(seed);
    return doc::encode_function(symmetric ? random_symmetric_grid(src, space, order)
                                          : random_grid(src, space, order));
  });
}

Json generate_density(const Json& space_doc, std::uint64_t seed, std::size_t N, bool product) {
  if (N < 1) fail(ErrorCode::Domain, "a density needs order >= 1");
  return dispatch(doc::mode_of_doc(space_doc), [&](auto tag) {
    using T = decltype(tag);
    const auto space = doc::decode_space<T>(space_doc);
    RandomSource src(seed);
    if (product) return doc::encode_density(product_density(random_positive_factor(src, space), N));
    return doc::encode_density(random_symmetric_density(src, space, N));
  });
}

Json error_report(std::string_view command, ErrorCode code, std::string_view message) {
  Json r = doc::header(doc::Kind::Report, Mode::Exact);
  r.erase("mode");
  r["command"] = std::string(command);
  r["status"] = "error";
  r["error"] = Json{{"code", std::string(to_string(code))}, {"message", std::string(message)}};
  return r;
}

Json internal_error_report(std::string_view command, std::string_view message) {
  Json r = error_report(command, ErrorCode::Validation, message);
  r["error"]["code"] = "internal-error";
  return r;
}

}  // namespace gmean::cmd
