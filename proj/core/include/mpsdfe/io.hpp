#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mpsdfe/mps.hpp"

namespace mpsdfe {

/// On-disk tensor chains are JSON documents:
///
///   {
///     "format": "mpsdfe-chain", "version": 1,
///     "kind": "mps" | "mpo",
///     "n": <sites>,
///     "bondDims": [alpha_0, ..., alpha_n],
///     "canonicalForm": "None" | "RightCanonicalCenterFirst",   (mps)
///     "hermitian": true | false,                                (mpo)
///     "provenance": {"generator": ..., "seed": ..., "maxBond": ...},
///     "sites": [ ... ]
///   }
///
/// An MPS site is nested as [left][right][physical] -> [re, im]; an MPO site
/// as [left][right][out][in] -> [re, im]. Doubles are written in shortest
/// round-trip form, so save/load is bit-exact.
enum class ChainKind { Mps, Mpo };

std::string mps_to_json(const Mps& mps);
std::string mpo_to_json(const Mpo& mpo);
Mps mps_from_json(std::string_view text);
Mpo mpo_from_json(std::string_view text);
ChainKind chain_kind_of(std::string_view text);

void save_mps(const Mps& mps, const std::filesystem::path& path);
void save_mpo(const Mpo& mpo, const std::filesystem::path& path);
Mps load_mps(const std::filesystem::path& path);
Mpo load_mpo(const std::filesystem::path& path);
ChainKind peek_chain_kind(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mpsdfe
