#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nucleus/cliques.hpp"
#include "nucleus/common.hpp"
#include "nucleus/hierarchy.hpp"
#include "nucleus/peel.hpp"
#include "nucleus/peel_approx.hpp"

namespace nucleus {

// Coreness export: one header line, then `v1,...,vr,coreness` sorted by id.
inline void write_coreness_csv(std::ostream& out, const RCliqueIndex& idx,
                               int s, const PeelResult& res) {
  out << "# r=" << idx.r() << " s=" << s << " n_r=" << idx.size()
      << " k_max=" << res.k_max << "\n";
  for (cid id = 0; id < idx.size(); ++id) {
    for (vid v : idx.verts_of(id)) out << v << ',';
    out << res.coreness[id] << '\n';
  }
}

inline void write_coreness_csv(std::ostream& out, const RCliqueIndex& idx,
                               int s, const ApproxResult& res, double delta) {
  double k_max = res.rank_values.empty() ? 0 : res.rank_values.back();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", delta);
  out << "# r=" << idx.r() << " s=" << s << " n_r=" << idx.size()
      << " k_max=" << detail::format_level(k_max) << " approx_delta=" << buf
      << "\n";
  for (cid id = 0; id < idx.size(); ++id) {
    for (vid v : idx.verts_of(id)) out << v << ',';
    out << detail::format_level(res.approx_coreness[id]) << '\n';
  }
}

// Nuclei report: `level,num_r_cliques,num_vertices,edge_density`.
inline void write_nuclei_csv(std::ostream& out,
                             const std::vector<Nucleus>& nuclei,
                             bool with_density) {
  out << "level,num_r_cliques,num_vertices,edge_density\n";
  for (const auto& nu : nuclei) {
    out << detail::format_level(nu.level) << ','
        << nu.member_r_cliques.size() << ',' << nu.vertex_set.size() << ',';
    if (with_density && nu.edge_density >= 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", nu.edge_density);
      out << buf;
    } else {
      out << '-';
    }
    out << '\n';
  }
}

}  // namespace nucleus
