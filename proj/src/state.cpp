//===-- state.cpp ----------------------------------------------------------===//

#include "solar/state.h"

#include <cassert>

namespace solar {

PtSet &PointsToState::fieldPt(ObjId base, const FieldMember *fieldOrArr) {
  assert(objects[base].kind != ObjKind::Heap || objects[base].typeKnown());
  return fieldPt_[{base, fieldOrArr}];
}

const PtSet &PointsToState::fieldPt(ObjId base,
                                    const FieldMember *fieldOrArr) const {
  static const PtSet empty;
  auto it = fieldPt_.find({base, fieldOrArr});
  return it == fieldPt_.end() ? empty : it->second;
}

size_t PointsToState::factCount() const {
  size_t n = 0;
  for (auto &kv : varPt_)
    n += kv.second.size();
  for (auto &kv : fieldPt_)
    n += kv.second.size();
  for (auto &kv : staticPt_)
    n += kv.second.size();
  n += callEdges_.size();
  n += derived_.size();
  n += objects.size();
  n += reachable_.size();
  return n;
}

} // namespace solar
