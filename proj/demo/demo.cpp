// Classify a few characteristic matrices and rebuild the group behind one of them.

#include <iostream>

#include "pgcm/pgcm.hpp"

using namespace pgcm;

int main()
{
  Ctx f3 = make_context(3);
  ExponentType strict(3, 2, 1);

  CharMatrix w{f3, strict, parse_matrix<3>(*f3, "0,0,0;0,0,1;0,2,0")};
  ClassifyResult r = classify(w);
  std::cout << format_matrix(w.w) << " -> " << to_string(*f3, r.label) << "\n";
  std::cout << "  witness maps it to " << format_matrix(apply(r.witness, w).w) << "\n";

  InvariantReport inv = invariants(w, Method::Table);
  std::cout << "  I_min=" << inv.i_min << " I_max=" << inv.i_max << "\n";

  // scramble by a random transform; the label does not move
  std::mt19937_64 rng(7);
  auto all = enumerate_transforms(f3, strict, 1u << 20);
  CharMatrix v = apply(all[rng() % all.size()], w);
  std::cout << format_matrix(v.w) << " -> " << to_string(*f3, classify(v).label) << "\n";

  // the same question answered inside the group
  Group G({f3, strict, w.w}, kOracleOrderCap);
  IndexRange idx = a1_index_range_fast(G);
  std::cout << "  |G|=" << G.order() << " oracle I_min=" << idx.i_min << " I_max=" << idx.i_max << "\n";

  Ctx f2 = make_context(2);
  ExponentType tiny(1, 1, 1);
  CharMatrix s{f2, tiny, Mat3::identity()};
  FamilyLabel l = classify_tiny(s);
  Group S({f2, tiny, s.w});
  std::cout << "identity at p=2, m=(1,1,1) -> " << l.family
            << ", metahamiltonian=" << (metahamiltonian_oracle(S, MetaMode::Full) ? "yes" : "no") << "\n";
}
