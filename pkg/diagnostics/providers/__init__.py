# Proveedores de familias de canales
