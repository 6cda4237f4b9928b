"""Load a knowledge base, inspect it, and round-trip it through Turtle.

Run:  python demos/01_parse_and_validate.py
"""

import signalkg as sk

# The bundled scene: an attacker who may break the lobby window, an employee
# who may drop a tray of glasses, one microphone listening for "glass".
text = sk.demo_kb_path("building").read_text(encoding="utf-8")
kb = sk.parse_kb(text)

print("entities:")
for e in kb.entities.values():
    print(f"  {e.id:<10} prior P(present) = {e.prior_presence}")

print("\nactions:")
for a in kb.actions.values():
    rooms = sk.eligible_rooms(a.id, kb)
    print(f"  {a.id:<14} by {a.performed_by:<9} in {rooms} -> emits {a.creates_signal}")

print("\nsignal-class hierarchy (matching walks broader links upward):")
for c in kb.signal_classes.values():
    print(f"  {c.id:<22} broader = {c.broader}")
print("  breaking-glass-sound matches 'glass'? ",
      sk.class_matches("breaking-glass-sound", "glass", kb))
print("  glass matches 'breaking-glass-sound'?",
      sk.class_matches("glass", "breaking-glass-sound", kb))

# validate() returns diagnostics; an empty list means ready to compile.
diags = sk.validate(kb)
print(f"\ndiagnostics: {[sk.format_diagnostic(d) for d in diags] or 'none'}")

# Serialization is canonical: parse(serialize(parse(doc))) == parse(doc),
# and serializing twice yields byte-identical text.
canonical = sk.serialize_kb(kb)
assert sk.parse_kb(canonical) == kb
assert sk.serialize_kb(sk.parse_kb(canonical)) == canonical
print("\nround trip OK; canonical serialization starts with:\n")
print("\n".join(canonical.splitlines()[:10]))
