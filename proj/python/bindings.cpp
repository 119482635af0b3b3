#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "rigidlab/amplify.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/experiment.hpp"
#include "rigidlab/formulas.hpp"
#include "rigidlab/lift.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/matrix_io.hpp"
#include "rigidlab/rigidity.hpp"
#include "rigidlab/spectral.hpp"

namespace py = pybind11;
using namespace rigidlab;

namespace {

py::object fraction(const Rational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  const py::object as_int = py::module_::import("builtins").attr("int");
  return cls(as_int(q.get_num().get_str()), as_int(q.get_den().get_str()));
}

Rational rational(const py::handle& h) {
  const py::object f = py::module_::import("fractions").attr("Fraction")(h);
  Rational q(py::str(f.attr("numerator")).cast<std::string>() + "/" +
             py::str(f.attr("denominator")).cast<std::string>());
  q.canonicalize();
  return q;
}

SignMatrix sign_from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
  std::vector<int> flat;
  for (const auto& row : rows) {
    if (row.size() != c) throw DomainError("ragged rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return SignMatrix::from_values(r, c, flat);
}

FpMatrix fp_from_rows(const std::vector<std::vector<std::int64_t>>& rows, int p) {
  const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
  FpMatrix m(r, c, p);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DomainError("ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

template <class M>
std::vector<std::vector<int>> to_rows(const M& m) {
  std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

py::dict rigidity_dict(const RigidityResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["exhaustive"] = r.exhaustive;
  d["rank"] = r.rank;
  d["p"] = r.p;
  d["mode"] = to_string(r.mode);
  d["witness"] = r.witness;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rigidlab, m) {
  m.doc() = "Matrix rigidity: exact solvers, spectral bounds, low-rank lifts and amplification";
  m.attr("__version__") = version();

  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<SignMatrix>(m, "SignMatrix")
      .def(py::init(&sign_from_rows), py::arg("rows"))
      .def_property_readonly("rows", &SignMatrix::rows)
      .def_property_readonly("cols", &SignMatrix::cols)
      .def("__getitem__", [](const SignMatrix& s, std::pair<std::size_t, std::size_t> ij) {
        if (ij.first >= s.rows() || ij.second >= s.cols()) throw py::index_error();
        return s(ij.first, ij.second);
      })
      .def("tolist", &to_rows<SignMatrix>)
      .def("__eq__", [](const SignMatrix& a, const SignMatrix& b) { return a == b; })
      .def("__repr__", [](const SignMatrix& s) { return format_matrix(s); });

  py::class_<FpMatrix>(m, "FpMatrix")
      .def(py::init(&fp_from_rows), py::arg("rows"), py::arg("p"))
      .def_property_readonly("rows", &FpMatrix::rows)
      .def_property_readonly("cols", &FpMatrix::cols)
      .def_property_readonly("p", &FpMatrix::modulus)
      .def("__getitem__", [](const FpMatrix& f, std::pair<std::size_t, std::size_t> ij) {
        if (ij.first >= f.rows() || ij.second >= f.cols()) throw py::index_error();
        return f(ij.first, ij.second);
      })
      .def("tolist", &to_rows<FpMatrix>)
      .def("__eq__", [](const FpMatrix& a, const FpMatrix& b) { return a == b; })
      .def("__repr__", [](const FpMatrix& f) { return format_matrix(f); });

  py::class_<LowRankFp>(m, "LowRankFp")
      .def(py::init([](const FpMatrix& u, const FpMatrix& v) { return LowRankFp{u, v}; }), py::arg("U"), py::arg("V"))
      .def_static("from_matrix", &LowRankFp::from_matrix)
      .def_readonly("U", &LowRankFp::U)
      .def_readonly("V", &LowRankFp::V)
      .def_property_readonly("rank_bound", &LowRankFp::rank_bound)
      .def("materialize", &LowRankFp::materialize);

  m.def("parse_matrix", [](const std::string& text) -> py::object {
    return std::visit([](auto&& mat) { return py::cast(mat); }, parse_matrix(text));
  });
  m.def("fp_rank", &fp_rank);
  m.def("booleanize", &booleanize);
  m.def("sign_to_fp", &sign_to_fp, py::arg("s"), py::arg("p"));
  m.def("boolean_distance", &boolean_distance);
  m.def("h1", &h1);
  m.def("m1", &m1);
  m.def("walsh_hadamard", [](int n) { return walsh_hadamard(n); });
  m.def("distance_matrix", [](int n) { return distance_matrix(n); });
  m.def("kron_power", [](const SignMatrix& a, int n) { return kron_power(a, n); });
  m.def("maj_power", [](const SignMatrix& a, int n) { return maj_power(a, n); });

  m.def(
      "exact_boolean_rigidity",
      [](const SignMatrix& a, std::size_t r, int p, double budget) {
        SolverOptions o;
        o.budget = budget;
        return rigidity_dict(exact_boolean_rigidity(a, r, p, o));
      },
      py::arg("a"), py::arg("r"), py::arg("p"), py::arg("budget") = kDefaultWorkBudget);
  m.def(
      "exact_regular_rigidity",
      [](const FpMatrix& a, std::size_t r, double budget) {
        SolverOptions o;
        o.budget = budget;
        return rigidity_dict(exact_regular_rigidity(a, r, o));
      },
      py::arg("a"), py::arg("r"), py::arg("budget") = kDefaultWorkBudget);
  m.def("bruteforce_oracle", py::overload_cast<const SignMatrix&, std::size_t, int, double>(&bruteforce_oracle),
        py::arg("a"), py::arg("r"), py::arg("p"), py::arg("budget") = kDefaultOracleBudget);
  m.def(
      "rank1_search", [](const SignMatrix& a, int p, double budget) { return rigidity_dict(rank1_search(a, p, budget)); },
      py::arg("a"), py::arg("p"), py::arg("budget") = kDefaultWorkBudget);
  m.def("trivial_rank1_bound", &trivial_rank1_bound);

  m.def("lift_constants", [](int p) {
    const auto& c = lift_constants(p);
    py::dict d;
    d["p"] = c.p;
    d["c_f"] = c.c_f;
    d["c_g"] = c.c_g;
    d["c"] = c.c;
    return d;
  });
  m.def("lift", [](const LowRankFp& l) {
    const LowRankCyclo lifted = lift_to_c(l);
    py::dict d;
    d["rtilde"] = lifted.rtilde();
    d["exact"] = lift_is_exact(lifted);
    d["max_entry_magnitude"] = lifted.max_entry_magnitude();
    return d;
  });
  m.def("booleanize_lowrank_fp", [](const LowRankFp& l) { return booleanize_lowrank_fp(l); });
  m.def("boolean_lift_rank_bound", &boolean_lift_rank_bound);

  m.def("largest_singular_value", [](const SignMatrix& a) {
    const SpectralReport r = largest_singular_value(a);
    py::dict d;
    d["sigma1"] = r.sigma1;
    d["method"] = to_string(r.method);
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["converged"] = r.converged;
    d["restarted"] = r.restarted;
    return d;
  });
  m.def("kron_sigma", &kron_sigma);
  m.def("distance_eigenvalues", &distance_eigenvalues);
  m.def("hamming_sigma", &hamming_sigma);
  m.def(
      "thm1_bound",
      [](const SignMatrix& a, std::size_t r, int p) {
        const BoundReport b = thm1_bound(a, r, p);
        py::dict d;
        d["sigma1"] = b.sigma1;
        d["c"] = b.c;
        d["rtilde"] = b.rtilde;
        d["bound"] = b.bound;
        d["positive"] = b.positive;
        return d;
      },
      py::arg("a"), py::arg("r"), py::arg("p"));
  m.def("kron_lb_constants", [](const SignMatrix& a, int p) {
    const KronConstants k = kron_lb_constants(a, p);
    return py::make_tuple(k.c1, k.c2);
  });

  m.def("kron_error_expected", [](int p, const py::object& p1, const py::object& pm1, const py::object& d1,
                                  const py::object& dm1, int n) {
    return fraction(kron_error_expected(p, rational(p1), rational(pm1), rational(d1), rational(dm1), n));
  });
  m.def("kron_theorem_bound", [](const py::object& alpha, const py::object& delta, int n) {
    return fraction(kron_theorem_bound(rational(alpha), rational(delta), n));
  });
  m.def(
      "best_seed_search",
      [](const SignMatrix& a, const LowRankFp& l, int n) {
        const SeedSearchResult r = best_seed_search(a, l, n);
        py::dict d;
        d["seed"] = r.seed;
        d["error"] = fraction(r.best.error);
        d["mean"] = fraction(r.mean);
        d["seeds_tried"] = r.seeds_tried;
        return d;
      },
      py::arg("a"), py::arg("l"), py::arg("n"));
  m.def("majority_agreement_prob", [](int k, int n) { return fraction(majority_agreement_prob(k, n)); });
  m.def("binomial_tail", [](int n, int a) { return fraction(binomial_tail(n, a)); });
  m.def("maj_amplified_error",
        [](int k, int n, const py::object& delta) { return fraction(maj_amplified_error(k, n, rational(delta))); });

  m.def("circuit_exponent", &circuit_exponent, py::arg("q"), py::arg("r"), py::arg("R"), py::arg("d"));
  m.def("obstruction_check", &obstruction_check, py::arg("k"), py::arg("r"), py::arg("R_lb"));
  auto schedule = [](const Schedule& s) {
    py::dict d;
    d["k"] = s.k;
    d["k_real"] = s.k_real;
    d["rank"] = s.rank;
    d["rhs"] = s.rhs;
    d["log2_gap"] = s.log2_gap;
    return d;
  };
  m.def("razborov_schedule_kron", [schedule](double n, double eps, double c) { return schedule(razborov_schedule_kron(n, eps, c)); });
  m.def("razborov_schedule_maj", [schedule](double n, double beta, double c) { return schedule(razborov_schedule_maj(n, beta, c)); });

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& timestamp) {
        const ExperimentConfig cfg = config_from_json(config_json);
        return render(run_experiment(cfg), effective_format(cfg), timestamp);
      },
      py::arg("config_json"), py::arg("timestamp") = "");
}
