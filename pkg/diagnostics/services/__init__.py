# Servicios de diagnóstico
