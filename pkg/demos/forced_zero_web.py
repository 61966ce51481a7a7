"""
Vanishing forced through a web graph
====================================

If a solution is zero at the first two sites of a channel, the extension
procedure spreads the zero set over the whole finite part and into every
other channel.  The truncated operator confirms that no nonzero solution
vanishes on those two sites.
"""

from graphschro.campaigns import forced_zero_web
from graphschro.dimension import forced_zero_set, oracle_dimension
from graphschro.graph_model import truncate

web = forced_zero_web()
M = web.M

fz = forced_zero_set(web, {0, M + 0})
print("zero on the finite part:", sorted(fz.finite))
print("zero channels:", sorted(fz.channels), " everything:", fz.everything)

# Knowing that channel 1 vanishes is enough on its own.
fz = forced_zero_set(web, set(), channel_zeros={1})
print("from channel 1 alone -> everything:", fz.everything)

for N in (8, 16, 32):
    g, imap = truncate(web, N)
    print(f"N={N:2d}  dim of solutions vanishing at nu_0(0), nu_0(1): {oracle_dimension(g, {0, imap.row(0, 1)})}")
