#pragma once

#include <string>

#include "json.hpp"
#include "stingray/altgrp.hpp"
#include "stingray/counting.hpp"
#include "stingray/oracle.hpp"
#include "stingray/pipeline.hpp"

namespace stingray {

// JSON records for CLI output. Exact quantities are rational strings; estimates are
// doubles next to their trial counts. Nothing time- or thread-dependent is written.

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "stingray-lab/1";

Json envelope(const std::string& command);  // {"schema": ..., "command": ...}

Json rat_json(const Rat& x);
Json matrix_json(const Matrix& m);
Json certificate_json(const StingrayCertificate& c);
Json duo_json(const DuoReport& D);
Json verdict_json(const Verdict& v);
Json estimate_json(const MCEstimate& m);
Json count_json(const CountReport& c);
Json oracle_json(const OracleResult& r);
Json grid_row_json(const GridRow& g);
Json rho_json(const RhoGenReport& r);
Json embed_json(const EmbedResult& r);
Json cycle_json(const CycleCert& c);
Json alt_verdict_json(const AltVerdict& v);
Json alt_embed_json(const AltEmbedResult& r);

// per-trial log of a rho_gen run
std::string rho_trials_csv(const RhoGenReport& r);

// decimal rendering of an exact value, for reading alongside the rational string
std::string decimal_string(const Rat& x, unsigned digits = 12);

}  // namespace stingray
