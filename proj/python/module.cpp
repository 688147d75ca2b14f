#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fppcm/bp.hpp"
#include "fppcm/degrees.hpp"
#include "fppcm/fpp.hpp"
#include "fppcm/graph.hpp"
#include "fppcm/harness.hpp"
#include "fppcm/percolation.hpp"
#include "fppcm/weights.hpp"

namespace py = pybind11;
using namespace fppcm;

PYBIND11_MODULE(fppcm, m) {
    m.doc() = "First-passage percolation on scale-free configuration models";

    py::class_<TailParams>(m, "TailParams")
        .def(py::init<>())
        .def_readwrite("tau", &TailParams::tau)
        .def_readwrite("gamma", &TailParams::gamma)
        .def_readwrite("C", &TailParams::C)
        .def_readwrite("alpha", &TailParams::alpha)
        .def("validate", &TailParams::validate);

    py::class_<DegreeSequence>(m, "DegreeSequence")
        .def_static("from_degrees", &DegreeSequence::from_degrees,
                    py::arg("degrees"), py::arg("parity_fix") = true)
        .def_readonly("degrees", &DegreeSequence::degrees)
        .def_readonly("total_half_edges", &DegreeSequence::total_half_edges)
        .def("n", &DegreeSequence::n)
        .def("max_degree", &DegreeSequence::max_degree);

    m.def("synthesize", &synthesize, py::arg("n"), py::arg("params"),
          py::arg("seed"));
    m.def("empirical_tail", &empirical_tail);
    m.def("size_biased", [](const DegreeSequence& ds) {
        return size_biased(ds).probabilities;
    });

    py::class_<WeightDist>(m, "WeightDist")
        .def_readonly("name", &WeightDist::name)
        .def_readonly("continuous", &WeightDist::continuous)
        .def("cdf", [](const WeightDist& w, double x) { return w.cdf(x); })
        .def("ginv", [](const WeightDist& w, double y) { return w.ginv(y); })
        .def("quantile_exp_neg",
             [](const WeightDist& w, double m_) { return w.quantile_exp_neg(m_); })
        .def("sample", &WeightDist::sample);

    m.def("parse_weight_spec", &parse_weight_spec);
    m.def("classify_explosive",
          [](const WeightDist& w, int k_max) {
              return classify_explosive(w, k_max).explosive;
          },
          py::arg("w"), py::arg("k_max") = 40);
    m.def("characteristic_sum", &characteristic_sum);
    m.def("characteristic_term_count", &characteristic_term_count);

    py::class_<MultiGraph>(m, "MultiGraph")
        .def_readonly("n", &MultiGraph::n)
        .def("num_edges",
             [](const MultiGraph& g) { return g.edges.size(); })
        .def("degree_of", &MultiGraph::degree_of)
        .def("edges", [](const MultiGraph& g) {
            std::vector<std::tuple<Vertex, Vertex, double>> out;
            out.reserve(g.edges.size());
            for (const Edge& e : g.edges) out.emplace_back(e.u, e.v, e.weight);
            return out;
        });

    m.def("build_graph",
          [](const DegreeSequence& ds, const std::string& weight_spec,
             std::uint64_t seed, bool erased) {
              const WeightDist w = parse_weight_spec(weight_spec);
              MultiGraph g = build(ds, w, seed);
              if (erased) return erased_as_multigraph(erase(g, seed + 1));
              return g;
          },
          py::arg("ds"), py::arg("weight_spec"), py::arg("seed"),
          py::arg("erased") = false);

    m.def("weighted_distance", [](const MultiGraph& g, Vertex u, Vertex v) {
        const DistanceResult r = weighted_distance(g, u, v);
        return py::make_tuple(r.weighted, r.hopcount, r.path);
    });
    m.def("graph_distance", &graph_distance);

    py::class_<PercolationSpec>(m, "PercolationSpec")
        .def(py::init<>())
        .def_readwrite("b", &PercolationSpec::b)
        .def_readwrite("c", &PercolationSpec::c)
        .def_readwrite("eta", &PercolationSpec::eta)
        .def("p", &PercolationSpec::p);

    m.def("threshold_xi", &threshold_xi);
    m.def("s_of_x", &s_of_x);
    m.def("kn_from_ktilde", &kn_from_ktilde);
    m.def("layer_recursion", [](long long kn, double tau, double gamma,
                                double D, double n, double alpha) {
        const LayerRecursion r = layer_recursion(kn, tau, gamma, D, n, alpha);
        return py::make_tuple(r.y, r.i_max, r.closed_form, r.delta_n);
    });
    m.def("edge_percolate",
          [](const MultiGraph& g, const PercolationSpec& spec,
             const std::string& weight_spec, std::uint64_t seed) {
              const WeightDist w = parse_weight_spec(weight_spec);
              const PercolatedGraph pg = edge_percolate(g, spec, w, seed);
              return py::make_tuple(pg.kept_edges, pg.kept_degree);
          });

    m.def("bp_simulate",
          [](double tau, double cstar, double gamma,
             const std::string& weight_spec, int k_max, std::uint64_t node_cap,
             std::uint64_t seed) {
              const WeightDist w = parse_weight_spec(weight_spec);
              const BPRun run =
                  simulate(root_degree_dist(tau), pareto_offspring(tau, cstar, gamma),
                           w, tau, k_max, node_cap, seed);
              py::dict d;
              d["generation_sizes"] = run.generation_sizes;
              d["y_norm"] = run.y_norm;
              d["gen_min_weights"] = run.gen_min_weights;
              d["first_passage_front"] = run.first_passage_front;
              d["truncated"] = run.truncated;
              return d;
          });

    m.def("run_experiment_text", [](const std::string& config_text) {
        ExperimentConfig cfg = ExperimentConfig::parse_text(config_text);
        const ExperimentResult result = run_experiment(cfg);
        py::dict d;
        d["pass"] = result.pass;
        d["rows"] = result.rows.size();
        d["report"] = result.report.dump();
        return d;
    });
}
