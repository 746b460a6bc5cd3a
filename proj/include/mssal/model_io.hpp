#pragma once

#include <cstdint>
#include <string>

#include "mssal/selection.hpp"
#include "mssal/types.hpp"

namespace mssal {

// Extra fit facts that travel with a saved model but live outside
// MixtureModel itself.
struct ModelMeta {
    int rho = 0;
    long n = 0;
    std::uint64_t seed = 0;
    bool converged = false;
};

// JSON with a schema_version field; numbers round-trip exactly, and
// save(load(f)) is byte-identical to f.
void save_model(const MixtureModel& model, const ModelMeta& meta,
                const std::string& path);
MixtureModel load_model(const std::string& path, ModelMeta* meta = nullptr);

void save_selection_report(const SelectionReport& report, long n,
                           std::uint64_t seed, const std::string& path);

}  // namespace mssal
