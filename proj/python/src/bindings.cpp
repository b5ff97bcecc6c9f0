#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zrplab/acceptance.hpp"
#include "zrplab/dyn.hpp"
#include "zrplab/mpf.hpp"
#include "zrplab/qkit.hpp"
#include "zrplab/stationary.hpp"
#include "zrplab/stoch.hpp"
#include "zrplab/tetra.hpp"
#include "zrplab/transfer.hpp"

namespace py = pybind11;
using namespace zrp;

namespace {

// Rationals cross the boundary as fractions.Fraction; ints and "p/q"
// strings are accepted on input, floats are not.
Rational to_rational(const py::handle& h, const char* field) {
  if (py::isinstance<py::float_>(h))
    throw py::type_error(std::string(field) + ": floats are not exact; pass a Fraction, an int or a 'p/q' string");
  return parse_rational(py::str(h).cast<std::string>(), field);
}

py::object to_fraction(const Rational& x) {
  // Leaked on purpose: destroying it after interpreter shutdown would crash.
  static auto* fraction = new py::object(py::module_::import("fractions").attr("Fraction"));
  return (*fraction)(to_string(x));
}

std::vector<Rational> to_rationals(const py::iterable& xs, const char* field) {
  std::vector<Rational> out;
  for (auto h : xs) out.push_back(to_rational(h, field));
  return out;
}

MultiIndex to_index(const std::vector<int>& v) { return MultiIndex(v); }

State to_state(const std::vector<std::vector<int>>& occ) {
  State s;
  for (auto& a : occ) s.emplace_back(a);
  return s;
}

py::tuple state_tuple(const State& s) {
  py::list occ;
  for (auto& a : s) occ.append(py::tuple(py::cast(a.data())));
  return py::make_tuple(multiset_label(s), py::tuple(occ));
}

HamiltonianParams h_params(int n, const py::object& q, const py::object& mu, int sign) {
  if (sign != 1 && sign != -1) throw py::value_error("sign must be +1 or -1");
  return HamiltonianParams{n, to_rational(q, "q"), to_rational(mu, "mu"), sign};
}

HKind h_kind(const std::string& k) {
  if (k == "r") return HKind::r;
  if (k == "l") return HKind::l;
  if (k == "tilde") return HKind::tilde;
  throw py::value_error("kind must be 'r', 'l' or 'tilde'");
}

py::dict report_dict(const CheckReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["pass"] = r.pass;
  d["checked"] = r.checked;
  d["witness"] = r.witness;
  return d;
}

}  // namespace

PYBIND11_MODULE(_zrplab, m) {
  m.doc() = "Exact constructions for multispecies zero range processes";
  py::register_exception<PoleError>(m, "PoleError", PyExc_ZeroDivisionError);

  py::class_<SparseOperator>(m, "Operator")
      .def_property_readonly("shape", [](const SparseOperator& o) { return py::make_tuple(o.mat.rows(), o.mat.cols()); })
      .def_property_readonly("nnz", [](const SparseOperator& o) { return o.mat.nnz(); })
      .def("domain", [](const SparseOperator& o) {
        py::list l;
        for (auto& s : o.dom->states()) l.append(state_tuple(s));
        return l;
      })
      .def("codomain", [](const SparseOperator& o) {
        py::list l;
        for (auto& s : o.cod->states()) l.append(state_tuple(s));
        return l;
      })
      .def("entries", [](const SparseOperator& o) {
        py::list l;
        for (std::size_t j = 0; j < o.mat.cols(); ++j)
          for (auto& [i, v] : o.mat.column(j)) l.append(py::make_tuple(i, j, to_fraction(v)));
        return l;
      }, "(row, col, Fraction) triplets, column-major")
      .def("entry", [](const SparseOperator& o, std::size_t i, std::size_t j) { return to_fraction(o.mat.get(i, j)); })
      .def("column_sums", [](const SparseOperator& o) {
        py::list l;
        for (auto& s : o.mat.column_sums()) l.append(to_fraction(s));
        return l;
      })
      .def("markov_gate", [](const SparseOperator& o, const std::string& kind) {
        if (kind != "discrete" && kind != "continuous") throw py::value_error("kind must be 'discrete' or 'continuous'");
        return report_dict(markov_gate(o, kind == "discrete" ? GateKind::discrete : GateKind::continuous));
      }, py::arg("kind"))
      .def("__matmul__", [](const SparseOperator& a, const SparseOperator& b) { return compose(a, b); })
      .def("commutes_with", [](const SparseOperator& a, const SparseOperator& b) {
        return commutator(a, b).mat.nnz() == 0;
      })
      .def("__eq__", [](const SparseOperator& a, const SparseOperator& b) {
        return same_shape(a, b) && a.mat == b.mat;
      });

  m.def("qpoch", [](const py::object& z, const py::object& q, int n) {
    return to_fraction(qpoch(to_rational(z, "z"), to_rational(q, "q"), n));
  }, py::arg("z"), py::arg("q"), py::arg("n"));
  m.def("qbinom", [](int n, int k, const py::object& q) { return to_fraction(qbinom(n, k, to_rational(q, "q"))); },
        py::arg("n"), py::arg("k"), py::arg("q"));
  m.def("r3d", [](int a, int b, int c, int i, int j, int k, const py::object& q) {
    return to_fraction(r3d(a, b, c, i, j, k, to_rational(q, "q")));
  });

  m.def("build_R", [](const std::string& eps, int l, int mm, const py::object& z, const py::object& q) {
    return build_R(EpsilonSeq::parse(eps), l, mm, to_rational(z, "z"), to_rational(q, "q"));
  }, py::arg("eps"), py::arg("l"), py::arg("m"), py::arg("z"), py::arg("q"));
  m.def("script_S", [](const py::object& lambda, const py::object& mu, const py::object& q,
                       const std::vector<int>& weight) {
    return script_S(to_rational(lambda, "lambda"), to_rational(mu, "mu"), to_rational(q, "q"),
                    static_cast<int>(weight.size()), to_index(weight));
  }, py::arg("lam"), py::arg("mu"), py::arg("q"), py::arg("weight"));
  m.def("verify_stu", [](const SparseOperator& op) { return report_dict(verify_stu(op)); });

  m.def("periodic_scriptT", [](const py::object& lambda, const py::iterable& mu, const py::object& q,
                               const std::vector<int>& k) {
    return periodic_scriptT(to_rational(lambda, "lambda"), to_rationals(mu, "mu"), to_rational(q, "q"), to_index(k));
  }, py::arg("lam"), py::arg("mu"), py::arg("q"), py::arg("sector"));
  m.def("mixed_scriptT", [](const py::object& lambda, const py::iterable& mu, const py::object& q,
                            const std::vector<int>& bound) {
    return mixed_scriptT(to_rational(lambda, "lambda"), to_rationals(mu, "mu"), to_rational(q, "q"), to_index(bound));
  }, py::arg("lam"), py::arg("mu"), py::arg("q"), py::arg("bound"));
  m.def("hamiltonian", [](const std::string& kind, int L, const std::vector<int>& sector, const py::object& q,
                          const py::object& mu, int sign) {
    HKind k = h_kind(kind);
    auto p = h_params(static_cast<int>(sector.size()), q, mu, sign);
    auto basis = make_basis(k == HKind::tilde ? truncation_states(L, to_index(sector))
                                              : enumerate_sector(L, to_index(sector)));
    return assemble_H(k, p, basis);
  }, py::arg("kind"), py::arg("L"), py::arg("sector"), py::arg("q"), py::arg("mu"), py::arg("sign") = 1,
        "H_r ('r'), H_l ('l') on a ring sector, or H~ ('tilde') on the truncation bounded by `sector`");

  m.def("stationary", [](const py::object& lambda, const py::iterable& mu, const py::object& q,
                         const std::vector<int>& k) {
    auto v = stationary_scriptT(to_rational(lambda, "lambda"), to_rationals(mu, "mu"), to_rational(q, "q"), to_index(k));
    py::list out;
    for (std::size_t i = 0; i < v.p.size(); ++i) {
      py::tuple s = state_tuple((*v.basis)[i]);
      out.append(py::make_tuple(s[0], s[1], to_fraction(v.p[i])));
    }
    return out;
  }, py::arg("lam"), py::arg("mu"), py::arg("q"), py::arg("sector"),
        "[(label, occupation, probability)] in basis order");

  m.def("mpf_trace", [](const std::vector<std::vector<int>>& sigma, const py::iterable& mu, const py::object& q, int N) {
    MpfValue v = stationary_mpf(to_state(sigma), to_rationals(mu, "mu"), to_rational(q, "q"), N);
    py::dict d;
    d["value"] = to_fraction(v.value);
    d["value_2N"] = to_fraction(v.value_2N);
    d["N"] = v.N;
    d["rel_gap"] = v.rel_gap;
    d["warning"] = v.warning;
    return d;
  }, py::arg("occupation"), py::arg("mu"), py::arg("q"), py::arg("N"));
  m.def("mpf_trace_exact_n2", [](const std::vector<std::vector<int>>& sigma, const py::iterable& mu,
                                 const py::object& q) {
    return to_fraction(stationary_mpf_exact_n2(to_state(sigma), to_rationals(mu, "mu"), to_rational(q, "q")));
  }, py::arg("occupation"), py::arg("mu"), py::arg("q"));
  m.def("G_k_exact_n2", [](const std::vector<int>& k, const py::iterable& mu, const py::object& q) {
    return to_fraction(G_k_exact_n2(to_index(k), to_rationals(mu, "mu"), to_rational(q, "q")));
  }, py::arg("sector"), py::arg("mu"), py::arg("q"));

  m.def("gillespie", [](const std::vector<std::vector<int>>& initial, const std::string& kind, const py::object& q,
                        const py::object& mu, int sign, double t_max, std::size_t max_events, std::uint64_t seed) {
    GillespieOptions o;
    State s0 = to_state(initial);
    o.kind = h_kind(kind);
    o.p = h_params(s0.empty() ? 0 : static_cast<int>(s0.front().size()), q, mu, sign);
    o.t_max = t_max;
    o.max_events = max_events;
    GillespieResult r;
    {
      py::gil_scoped_release release;
      r = gillespie_run(s0, o, RngStream{seed, 0});
    }
    py::dict occ;
    for (auto& [st, t] : r.occupation) occ[py::str(multiset_label(st))] = t;
    py::dict d;
    d["events"] = r.events;
    d["time"] = r.time;
    d["occupation"] = occ;
    d["conserved"] = r.conserved;
    d["final"] = state_tuple(r.final_state);
    return d;
  }, py::arg("initial"), py::arg("kind"), py::arg("q"), py::arg("mu"), py::arg("sign") = 1,
        py::arg("t_max") = 1e300, py::arg("max_events") = 0, py::arg("seed") = 0,
        "Occupation times per multiset label; q and mu may be Fractions or 'p/q' strings");

  m.def("run_acceptance", [](const std::vector<int>& ids, std::uint64_t seed) {
    AcceptanceOptions o;
    o.seed = seed;
    o.only = std::set<int>(ids.begin(), ids.end());
    std::vector<CriterionResult> rs;
    {
      py::gil_scoped_release release;
      rs = run_acceptance(o);
    }
    py::list out;
    for (auto& r : rs) {
      py::dict d;
      d["id"] = r.id;
      d["title"] = r.title;
      d["pass"] = r.pass;
      d["checks"] = r.checks;
      d["detail"] = r.detail;
      out.append(d);
    }
    return out;
  }, py::arg("ids") = std::vector<int>{}, py::arg("seed") = AcceptanceOptions{}.seed);
}
