#include "rvsim/isa/types.hpp"

namespace rvsim {

std::string_view priv_name(Priv p) {
  switch (p) {
    case Priv::U: return "U";
    case Priv::S: return "S";
    case Priv::M: return "M";
  }
  return "?";
}

uint64_t page_fault_cause(AccessType access) {
  switch (access) {
    case AccessType::Fetch: return cause::kInstrPageFault;
    case AccessType::Load: return cause::kLoadPageFault;
    case AccessType::Store: return cause::kStorePageFault;
  }
  return cause::kLoadPageFault;
}

uint64_t access_fault_cause(AccessType access) {
  switch (access) {
    case AccessType::Fetch: return cause::kInstrAccessFault;
    case AccessType::Load: return cause::kLoadAccessFault;
    case AccessType::Store: return cause::kStoreAccessFault;
  }
  return cause::kLoadAccessFault;
}

uint64_t misaligned_cause(AccessType access) {
  switch (access) {
    case AccessType::Fetch: return cause::kInstrMisaligned;
    case AccessType::Load: return cause::kLoadMisaligned;
    case AccessType::Store: return cause::kStoreMisaligned;
  }
  return cause::kLoadMisaligned;
}

}  // namespace rvsim
