#include <json.hpp>

#include "kspecpart/driver.hpp"

namespace ksp {

std::string report_json(const KspReport& r, bool include_timings) {
  using nlohmann::ordered_json;
  auto time = [&](double s) { return include_timings ? s : 0.0; };
  ordered_json doc;
  doc["input"] = {{"vertices", r.vertices}, {"hyperedges", r.hyperedges}, {"k", r.k}, {"eps", r.eps},
                  {"bridge_edges", r.bridge_edges}, {"initial_cutsize", r.initial_cutsize}};
  doc["iterations"] = ordered_json::array();
  for (const IterationReport& it : r.iterations) {
    doc["iterations"].push_back({{"hint_cutsize", it.hint_cutsize},
                                 {"eigen_residuals", it.eigen_residuals},
                                 {"eigen_converged", it.eigen_converged},
                                 {"n_candidates", it.n_candidates},
                                 {"best_tree_cutsize", it.best_tree_cutsize},
                                 {"ensemble_cutsize", it.ensemble_cutsize},
                                 {"coarse_vertices", it.coarse_vertices},
                                 {"coarse_edges", it.coarse_edges},
                                 {"proved_optimal", it.proved_optimal},
                                 {"seconds", time(it.seconds)}});
  }
  doc["final"] = {{"cutsize", r.final_cutsize}, {"balance", r.balance},   {"balanced", r.balanced},
                  {"seed", r.seed},             {"seconds", time(r.seconds)}};
  if (!r.diagnostic.empty()) doc["final"]["diagnostic"] = r.diagnostic;
  return doc.dump(2) + "\n";
}

}  // namespace ksp
