#pragma once

#include "blissthc/hamiltonian.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace blissthc::tensor_core {

// FCIDUMP-style text format.
//
// Header: either a single line holding NORB=<int> and NELEC=<int> (other KEY=VALUE
// pairs are ignored), or a Fortran namelist block starting with "&FCI" and ending
// with "&END" or "/".
//
// Records: "value p q r s", indices 1-based.
//   p q r s all nonzero  -> g_pqrs (expanded to its 8 symmetric images)
//   p q nonzero, r=s=0   -> h_pq   (expanded to h_qp)
//   all zero             -> core energy
// Duplicate images that disagree by more than 1e-8 raise IntegrityError.
ElectronicHamiltonian load_fcidump(std::istream& in);
ElectronicHamiltonian load_fcidump_file(const std::string& path);

// Writes the unique entries (p>=q, r>=s, pq>=rs) with |value| > cutoff.
void write_fcidump(std::ostream& out, const ElectronicHamiltonian& H, double cutoff = 0.0);

}  // namespace blissthc::tensor_core
