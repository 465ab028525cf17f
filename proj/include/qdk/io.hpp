// Text and JSON forms of groups, elements, irrep labels, braids and reports.
//
// Groups: {"kind":"symmetric","n":4}, {"kind":"alternating","n":5},
// {"kind":"cyclic","n":6}, {"kind":"semidirect","p":7,"q":3,"alpha":2},
// {"kind":"table","mul":[[...]]}, or the short forms S4, A5, Z6, Z7xZ3 (least
// alpha of order q) and Z7xZ3:4.
//
// Irrep labels: {"class_rep":<element>,"centralizer_irrep":<index>},
// fluxon:<class>, chargeon:<charge>, or <class>:<charge>. A class is named by
// e, transpositions, double-transpositions, <k>-cycles, 1-based cycle notation
// such as (1 2 3), or an element index; a charge by index or irrep label.
#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

#include "qdk/braid.hpp"
#include "qdk/checks.hpp"
#include "qdk/clebsch_gordan.hpp"
#include "qdk/dg_irreps.hpp"
#include "qdk/invariants.hpp"
#include "qdk/knot_oracle.hpp"

namespace qdk {

using Json = nlohmann::ordered_json;

// All parsers throw ParseError on malformed input.
FiniteGroup parse_group(std::string_view text);
Json group_to_json(const FiniteGroup& g);

Elem parse_element(const FiniteGroup& g, std::string_view text);
DGIrrepLabel parse_label(const QuantumDouble& qd, std::string_view text);
Json label_to_json(const QuantumDouble& qd, const DGIrrepLabel& l);

// Text form "B4: s2 S1" or JSON {"strands":4,"word":[[2,1],[1,-1]]}.
BraidWord parse_braid(std::string_view text);
Json braid_to_json(const BraidWord& w);

Json complex_to_json(cplx z);  // [re, im]
Json matrix_to_json(const Mat& m);  // row-major [re, im] pairs

Json to_json(const InvariantValue& v);
Json to_json(const SuiteReport& r);
Json to_json(const QuantumDouble& qd, const CGDecomposition& d);
Json to_json(const FluxonIdentityReport& r);
Json to_json(const FiniteGroup& g, const AmplificationReport& r);

// Indented "key: value" rendering for human readers.
std::string to_text(const Json& j);

}  // namespace qdk
