#!/usr/bin/env python
# coding: utf-8

# # Exact values of g(n) and where the longest runs sit
#
# g(n) is the smallest m such that every block of m consecutive integers
# contains one coprime to n.  Here we compute it exactly for the first nine
# primorials, locate a witness run and compare with the CRT construction.

# In[1]:


from jacobsthal import Radical, crt_witness, g_exact, g_naive, westzynthius_lower


# The wheel scan returns g together with a = the first start of a maximal
# run of nontotatives and b = how many maximal runs one period contains.

# In[2]:


for k in range(1, 10):
    res = g_exact(Radical.primorial(k))
    print(f"k={k}  n={Radical.primorial(k).n:>9}  g={res.g:>3}  a={res.a:>9}  b={res.b}")


# The brute-force gcd oracle agrees on small inputs.

# In[3]:


for n in (6, 15, 30, 105, 210, 2310):
    print(n, g_naive(n), g_exact(Radical.of([p for p in (2, 3, 5, 7, 11) if n % p == 0])).g)


# Any permutation of 1..k gives a CRT start b where b+1, ..., b+k all share a
# prime with n, so g(n) > k always.

# In[4]:


rad = Radical.primorial(5)
w = crt_witness(rad, perm=[2, 1, 3, 5, 4])
print(w.start, w.length, w.validate(), w.moduli_assignment)


# A simple lower bound for primorials, 2 p_{k-1}, stays below the true value.

# In[5]:


for k in range(2, 10):
    print(k, westzynthius_lower(k), g_exact(Radical.primorial(k)).g)
